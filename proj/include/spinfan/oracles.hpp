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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinfan/common.hpp"
#include "spinfan/coupling.hpp"
#include "spinfan/encoding.hpp"
#include "spinfan/layout.hpp"
#include "spinfan/spin_ops.hpp"

namespace spinfan {

/// Classical permutation on computational-basis labels. All gates verified
/// here are classical on the basis, so a bijective index map suffices.
struct TruthTable {
    int arity = 0;
    std::vector<std::int64_t> map;

    std::int64_t apply(std::int64_t in) const { return map.at(in); }

    bool is_bijection() const {
        std::vector<bool> seen(map.size(), false);
        for (std::int64_t out : map) {
            if (out < 0 || out >= static_cast<std::int64_t>(map.size()) || seen[out]) return false;
            seen[out] = true;
        }
        return true;
    }

    bool is_involution() const {
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(map.size()); ++i)
            if (map[map[i]] != i) return false;
        return true;
    }

    Matrix unitary() const {
        const std::int64_t dim = static_cast<std::int64_t>(map.size());
        Matrix u = Matrix::Zero(dim, dim);
        for (std::int64_t in = 0; in < dim; ++in) u(map[in], in) = 1.0;
        return u;
    }
};

/// P_p |x, t> = |x, t + x_1 + ... + x_p> (mod 2). Bit 1 is the label MSB,
/// the target is the last bit.
inline TruthTable parity_oracle(int p) {
    if (p < 1) throw std::invalid_argument("parity_oracle: p >= 1");
    TruthTable t{p + 1, {}};
    const std::int64_t dim = dim_for_qubits(p + 1);
    t.map.resize(dim);
    for (std::int64_t in = 0; in < dim; ++in) {
        const int parity = popcount64(in >> 1) & 1;
        t.map[in] = in ^ parity;
    }
    return t;
}

/// F_p |x, c> = |x_1 + c, ..., x_p + c, c> (mod 2); the control is the last bit.
inline TruthTable fanout_oracle(int p) {
    if (p < 1) throw std::invalid_argument("fanout_oracle: p >= 1");
    TruthTable t{p + 1, {}};
    const std::int64_t dim = dim_for_qubits(p + 1);
    t.map.resize(dim);
    const std::int64_t xmask = (dim - 1) & ~std::int64_t{1};
    for (std::int64_t in = 0; in < dim; ++in)
        t.map[in] = (in & 1) ? (in ^ xmask) : in;
    return t;
}

/// Standard Mod_q flips the (last) target bit iff weight(x) mod q != 0.
/// Generalized Mod_q has q-1 target bits t_1..t_{q-1} (t_1 most significant
/// of the trailing block) and flips t_1..t_i with i = weight(x) mod q.
inline TruthTable modq_oracle(int p, int q, bool generalized) {
    if (p < 1 || q < 2) throw std::invalid_argument("modq_oracle: need p >= 1, q >= 2");
    const int targets = generalized ? q - 1 : 1;
    TruthTable t{p + targets, {}};
    const std::int64_t dim = dim_for_qubits(p + targets);
    t.map.resize(dim);
    for (std::int64_t in = 0; in < dim; ++in) {
        const std::int64_t x = in >> targets;
        const int residue = popcount64(x) % q;
        std::int64_t flip = 0;
        if (generalized) {
            // 1^residue 0^(q-1-residue) within the target block
            flip = ((std::int64_t{1} << targets) - 1) ^
                   ((std::int64_t{1} << (targets - residue)) - 1);
        } else {
            flip = residue != 0 ? 1 : 0;
        }
        t.map[in] = in ^ flip;
    }
    return t;
}

/// || A psi - value psi ||_2.
inline double eigen_residual(const Matrix& op, const Vector& state, double value) {
    if (op.cols() != state.size())
        throw std::invalid_argument("eigen_residual: dimension mismatch");
    return (op * state - value * state).norm();
}

/// Residual minimized over the eigenvalue: || A psi - <psi|A|psi> psi ||_2
/// for a normalized psi.
inline double best_eigen_residual(const Matrix& op, const Vector& state) {
    const Vector applied = op * state;
    const double rayleigh = state.dot(applied).real() / state.squaredNorm();
    return (applied - rayleigh * state).norm();
}

/// Residual scan over encoder amplitudes (alpha, beta). The singlet line
/// alpha = -beta is the only one on which every encoded string stays an
/// eigenstate of J^2 for generic nonzero pair-structured couplings.
struct AppendixAScan {
    struct Point {
        Complex alpha;
        Complex beta;
        double min_residual = 0.0;  // over strings of weight >= 1
        double max_residual = 0.0;
        bool singlet = false;           // alpha == -beta (within 1e-12)
        bool off_singlet_band = false;  // |alpha + beta| > band threshold
    };
    std::vector<Point> points;
    bool singlet_ok = true;       // singlet points: residual < singlet_tol for all x
    bool off_singlet_ok = true;   // off-band points: residual > off_tol for all x
    double singlet_tol = 1e-8;
    double off_tol = 1e-3;
    double band = 0.3;
};

/// Real (alpha, beta) = (cos t, sin t) grid including the exact singlet
/// points t = 3pi/4 and 7pi/4 and the triplet point t = pi/4.
inline std::vector<GeneralEncoderParams> alpha_beta_grid(int steps = 32) {
    if (steps < 4) throw std::invalid_argument("alpha_beta_grid: need at least 4 steps");
    std::vector<GeneralEncoderParams> grid;
    for (int i = 0; i < steps; ++i) {
        const double t = 2.0 * pi * i / steps;
        grid.push_back({Complex(std::cos(t), 0.0), Complex(std::sin(t), 0.0)});
    }
    const double s = 1.0 / std::sqrt(2.0);
    grid.push_back({Complex(s, 0.0), Complex(-s, 0.0)});   // singlet
    grid.push_back({Complex(-s, 0.0), Complex(s, 0.0)});   // singlet, opposite sign
    grid.push_back({Complex(s, 0.0), Complex(s, 0.0)});    // triplet
    return grid;
}

/// For each grid point, encodes every string of weight >= 1 with the general
/// encoder and records the residual of J^2 on it (minimized over the
/// eigenvalue). singlet_ok / off_singlet_ok summarize the two assertions.
inline AppendixAScan appendix_a_necessity_scan(int p, const CouplingMatrix& couplings,
                                               const std::vector<GeneralEncoderParams>& grid,
                                               AppendixAScan thresholds = {}) {
    if (p < 2) throw std::invalid_argument("appendix_a_necessity_scan: p >= 2");
    if (couplings.pairs() != p)
        throw std::invalid_argument("appendix_a_necessity_scan: couplings/p mismatch");
    const Matrix j2 = build_j_squared_pauli(couplings);
    AppendixAScan scan = thresholds;
    scan.points.clear();
    scan.singlet_ok = true;
    scan.off_singlet_ok = true;
    for (const GeneralEncoderParams& params : grid) {
        if (!params.normalized())
            throw std::invalid_argument("appendix_a_necessity_scan: grid point not normalized");
        AppendixAScan::Point pt;
        pt.alpha = params.alpha;
        pt.beta = params.beta;
        pt.singlet = std::abs(params.alpha + params.beta) < 1e-12;
        pt.off_singlet_band = std::abs(params.alpha + params.beta) > scan.band;
        pt.min_residual = std::numeric_limits<double>::infinity();
        for (std::int64_t xi = 1; xi < (std::int64_t{1} << p); ++xi) {
            const BitString x = BitString::from_index(xi, p);
            const double res = best_eigen_residual(j2, encode_bitstring(x, params));
            pt.min_residual = std::min(pt.min_residual, res);
            pt.max_residual = std::max(pt.max_residual, res);
        }
        if (pt.singlet && pt.max_residual >= scan.singlet_tol) scan.singlet_ok = false;
        if (pt.off_singlet_band && pt.min_residual <= scan.off_tol) scan.off_singlet_ok = false;
        scan.points.push_back(pt);
    }
    return scan;
}

/// Exact lambda difference for equal-weight strings x, y at Hamming distance
/// 2 differing at pairs u (x_u = 1) and v (x_v = 0):
///   lambda_x - lambda_y = 2 sum_{n in C0(x), n != v} Jext(v, n)
///                       - 2 sum_{n in C0(y), n != u} Jext(u, n)
///                       + 2 (Jint(v) - Jint(u)).
inline double appendix_b_difference_rhs(const PairCouplings& c, const BitString& x,
                                        const BitString& y, int u, int v) {
    double rhs = 0.0;
    for (int n : x.zeros())
        if (n != v) rhs += 2.0 * c.jext(v, n);
    for (int n : y.zeros())
        if (n != u) rhs -= 2.0 * c.jext(u, n);
    rhs += 2.0 * (c.jint(v) - c.jint(u));
    return rhs;
}

struct AppendixBReport {
    double max_identity_residual = 0.0;  // worst |(lambda_x - lambda_y) - rhs|
    int identity_cases = 0;
    bool witness_found = false;
    std::string witness_x, witness_y;
    double lambda_diff = 0.0;
};

/// (i) Verifies the lambda difference identity on every equal-weight,
/// distance-2 pair of strings. (ii) Searches the weight classes for a pair
/// with unequal eigenvalues, the contrapositive witness that unequal external
/// couplings break Hamming-weight-only dependence.
inline AppendixBReport appendix_b_witness(const PairCouplings& c, double witness_tol = 1e-9) {
    const int p = c.pairs();
    if (p < 3) throw std::invalid_argument("appendix_b_witness: p >= 3 required");
    AppendixBReport report;
    const std::int64_t count = std::int64_t{1} << p;
    std::vector<double> lambdas(count);
    for (std::int64_t i = 0; i < count; ++i)
        lambdas[i] = lambda_closed_form(c, BitString::from_index(i, p));
    for (std::int64_t xi = 0; xi < count; ++xi) {
        const BitString x = BitString::from_index(xi, p);
        for (std::int64_t yi = 0; yi < count; ++yi) {
            if (xi == yi || popcount64(xi) != popcount64(yi) || popcount64(xi ^ yi) != 2)
                continue;
            const BitString y = BitString::from_index(yi, p);
            int u = 0, v = 0;
            for (int a = 1; a <= p; ++a) {
                if (x.bit(a) == 1 && y.bit(a) == 0) u = a;
                if (x.bit(a) == 0 && y.bit(a) == 1) v = a;
            }
            const double lhs = lambdas[xi] - lambdas[yi];
            const double rhs = appendix_b_difference_rhs(c, x, y, u, v);
            report.max_identity_residual =
                std::max(report.max_identity_residual, std::abs(lhs - rhs));
            ++report.identity_cases;
        }
    }
    for (std::int64_t xi = 0; xi < count && !report.witness_found; ++xi)
        for (std::int64_t yi = xi + 1; yi < count; ++yi) {
            if (popcount64(xi) != popcount64(yi)) continue;
            if (std::abs(lambdas[xi] - lambdas[yi]) > witness_tol) {
                report.witness_found = true;
                report.witness_x = BitString::from_index(xi, p).str();
                report.witness_y = BitString::from_index(yi, p).str();
                report.lambda_diff = lambdas[xi] - lambdas[yi];
                break;
            }
        }
    return report;
}

inline nlohmann::json to_json(const AppendixBReport& r) {
    nlohmann::json j{{"max_residual", r.max_identity_residual},
                     {"identity_cases", r.identity_cases},
                     {"witness_found", r.witness_found}};
    if (r.witness_found)
        j["witness"] = {{"x", r.witness_x}, {"y", r.witness_y}, {"lambda_diff", r.lambda_diff}};
    return j;
}

inline nlohmann::json to_json(const AppendixAScan& s) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& pt : s.points)
        points.push_back({{"alpha", {pt.alpha.real(), pt.alpha.imag()}},
                          {"beta", {pt.beta.real(), pt.beta.imag()}},
                          {"min_residual", pt.min_residual},
                          {"max_residual", pt.max_residual},
                          {"singlet", pt.singlet},
                          {"off_singlet_band", pt.off_singlet_band}});
    return {{"points", points},
            {"singlet_ok", s.singlet_ok},
            {"off_singlet_ok", s.off_singlet_ok},
            {"max_residual",
             s.points.empty()
                 ? 0.0
                 : std::max_element(s.points.begin(), s.points.end(),
                                    [](const auto& a, const auto& b) {
                                        return a.max_residual < b.max_residual;
                                    })
                       ->max_residual}};
}

}  // namespace spinfan
