// Copyright 2026 The spinfan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "spinfan/common.hpp"
#include "spinfan/coupling.hpp"
#include "spinfan/layout.hpp"

namespace spinfan {

/// Amplitudes of the encoded one-state E|10> = alpha|01> + beta|10>.
struct GeneralEncoderParams {
    Complex alpha;
    Complex beta;

    bool normalized(double tol = 1e-12) const {
        return std::abs(std::norm(alpha) + std::norm(beta) - 1.0) < tol;
    }

    /// The singlet encoder used by all circuits: E|10> = (|01> - |10>)/sqrt(2).
    static GeneralEncoderParams singlet() {
        const double s = 1.0 / std::sqrt(2.0);
        return {Complex(s, 0.0), Complex(-s, 0.0)};
    }
};

/// Two-qubit encoder E with E|00> = |00> and E|10> = (|01> - |10>)/sqrt(2),
/// realized as CNOT(1->2) . CH(2->1) . CNOT(1->2), left gate applied first.
inline Matrix encoder_unitary() {
    Matrix cnot = Matrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(3, 2) = cnot(2, 3) = 1.0;
    const double s = 1.0 / std::sqrt(2.0);
    // H on qubit 1 controlled by qubit 2.
    Matrix ch = Matrix::Zero(4, 4);
    ch(0, 0) = ch(2, 2) = 1.0;
    ch(1, 1) = ch(3, 1) = ch(1, 3) = s;
    ch(3, 3) = -s;
    return cnot * ch * cnot;
}

/// Encoder with E|00> = |00> and E|10> = alpha|01> + beta|10>. The remaining
/// two columns, unconstrained by the encoding, are fixed as
/// E|01> = conj(beta)|01> - conj(alpha)|10> and E|11> = |11>.
inline Matrix general_encoder(const GeneralEncoderParams& params) {
    if (!params.normalized())
        throw std::invalid_argument("general_encoder: |alpha|^2 + |beta|^2 must be 1");
    Matrix e = Matrix::Zero(4, 4);
    e(0, 0) = 1.0;
    e(1, 2) = params.alpha;
    e(2, 2) = params.beta;
    e(1, 1) = std::conj(params.beta);
    e(2, 1) = -std::conj(params.alpha);
    e(3, 3) = 1.0;
    return e;
}

/// |x_L> = tensor_a |psi_{x_a}> over the pairs of x, pair 1 most significant.
inline Vector encode_bitstring(const BitString& x,
                               std::optional<GeneralEncoderParams> params = std::nullopt) {
    if (x.size() < 2) throw std::invalid_argument("encode_bitstring: need p >= 2");
    const GeneralEncoderParams enc = params.value_or(GeneralEncoderParams::singlet());
    if (!enc.normalized())
        throw std::invalid_argument("encode_bitstring: encoder params not normalized");
    Vector psi0 = Vector::Zero(4);
    psi0(0) = 1.0;
    Vector psi1 = Vector::Zero(4);
    psi1(1) = enc.alpha;
    psi1(2) = enc.beta;
    Vector state = x.bit(1) ? psi1 : psi0;
    for (int a = 2; a <= x.size(); ++a) state = kron(state, x.bit(a) ? psi1 : psi0);
    return state;
}

/// Eigenvalue of J^2 on |x_L> for pair-structured couplings:
///   lambda_x = eta + 2 sum_{r in C1, t in C0} Jext(r,t)
///            + 2 sum_{r<s in C1} Jext(r,s) + 4 sum_{m<n in C0} Jext(m,n)
///            + sum_{m in C0} Jint(m) - sum_{r in C1} Jint(r),
/// where eta = -(1/2) sum_{i<j} J_ij is the identity shift from the SWAP
/// rewriting of the interaction. eta is independent of x, so eigenvalue
/// differences (and every phase the circuits depend on) never see it, but
/// the dense operator does.
inline double lambda_closed_form(const PairCouplings& c, const BitString& x) {
    if (x.size() != c.pairs())
        throw std::invalid_argument("lambda_closed_form: bit string length != pair count");
    const auto ones = x.ones();
    const auto zeros = x.zeros();
    double lambda = 0.0;
    for (int u = 1; u <= c.pairs(); ++u) {
        lambda -= 0.5 * c.jint(u);
        for (int v = u + 1; v <= c.pairs(); ++v) lambda -= 2.0 * c.jext(u, v);
    }
    for (int r : ones)
        for (int t : zeros) lambda += 2.0 * c.jext(r, t);
    for (std::size_t i = 0; i < ones.size(); ++i)
        for (std::size_t j = i + 1; j < ones.size(); ++j)
            lambda += 2.0 * c.jext(ones[i], ones[j]);
    for (std::size_t i = 0; i < zeros.size(); ++i)
        for (std::size_t j = i + 1; j < zeros.size(); ++j)
            lambda += 4.0 * c.jext(zeros[i], zeros[j]);
    for (int m : zeros) lambda += c.jint(m);
    for (int r : ones) lambda -= c.jint(r);
    return lambda;
}

inline double lambda_closed_form(const CouplingMatrix& c, const BitString& x) {
    return lambda_closed_form(require_pair_structure(c), x);
}

/// Closed-form eigenvalues and phase scalars for an encoded string.
struct EigenData {
    double lambda_x;  // eigenvalue of J^2
    double delta_x;   // eigenvalue of H_g: -lambda_x + g (p - w)
    double c_v;       // 2 sum_{t in C0 of v} Jext(p, t), with v = x forced to 1 at pair p
    double c_gp;      // 2 Jint(p) - g
    double c_x;       // sum_{m in C0} Jint(m) - sum_{r in C1} Jint(r)
};

inline EigenData eigen_data(const PairCouplings& c, double g, const BitString& x) {
    const int p = c.pairs();
    if (x.size() != p)
        throw std::invalid_argument("eigen_data: bit string length != pair count");
    EigenData d{};
    d.lambda_x = lambda_closed_form(c, x);
    d.delta_x = -d.lambda_x + g * (p - x.weight());
    const BitString v = x.with_bit(p, 1);
    d.c_v = 0.0;
    for (int t : v.zeros()) d.c_v += 2.0 * c.jext(p, t);
    d.c_gp = 2.0 * c.jint(p) - g;
    d.c_x = 0.0;
    for (int m : x.zeros()) d.c_x += c.jint(m);
    for (int r : x.ones()) d.c_x -= c.jint(r);
    return d;
}

inline EigenData eigen_data(const CouplingMatrix& c, double g, const BitString& x) {
    return eigen_data(require_pair_structure(c), g, x);
}

}  // namespace spinfan
