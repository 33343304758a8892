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

#include <stdexcept>
#include <utility>

#include "spinfan/common.hpp"
#include "spinfan/coupling.hpp"

namespace spinfan {

// Operators are built dense; construction is capped at 12 qubits (dim 4096)
// since downstream spectral work is O(dim^3).
inline constexpr int kMaxOperatorQubits = 12;

inline std::int64_t operator_dim(int m) {
    if (m > kMaxOperatorQubits)
        throw std::invalid_argument("operator construction capped at 12 qubits");
    return dim_for_qubits(m);
}

/// J_z = (1/2) sum_i Z_i on m qubits; diagonal with entries m/2 - weight.
inline Matrix total_spin_z(int m) {
    const std::int64_t dim = operator_dim(m);
    Matrix jz = Matrix::Zero(dim, dim);
    for (std::int64_t b = 0; b < dim; ++b)
        jz(b, b) = 0.5 * m - popcount64(b);
    return jz;
}

inline Matrix build_total_spin_z(const PairLayout& layout) {
    return total_spin_z(layout.physical_count());
}

namespace detail {

// Adds coupling * op2 to target, with the 4x4 two-site operator op2 embedded
// on qubits (i, j) of m (i is the more significant local bit).
inline void add_two_site(Matrix& target, const Matrix& op2, double coupling, int i, int j, int m) {
    const std::int64_t dim = target.rows();
    for (std::int64_t b = 0; b < dim; ++b) {
        const int li = 2 * bit_of(b, i, m) + bit_of(b, j, m);
        for (int lo = 0; lo < 4; ++lo) {
            const Complex w = op2(lo, li);
            if (w == Complex{}) continue;
            std::int64_t out = set_bit(b, i, m, lo >> 1);
            out = set_bit(out, j, m, lo & 1);
            target(out, b) += coupling * w;
        }
    }
}

// X_i X_j + Y_i Y_j + Z_i Z_j on two sites (basis order 00, 01, 10, 11).
inline const Matrix& heisenberg_two_site() {
    static const Matrix op = [] {
        Matrix m(4, 4);
        m << 1, 0, 0, 0,
             0, -1, 2, 0,
             0, 2, -1, 0,
             0, 0, 0, 1;
        return m;
    }();
    return op;
}

}  // namespace detail

/// J^2 in the Pauli form: (1/2) sum_{i<j} J_ij (X_i X_j + Y_i Y_j + Z_i Z_j).
inline Matrix build_j_squared_pauli(const CouplingMatrix& c) {
    const int m = c.layout.physical_count();
    const std::int64_t dim = operator_dim(m);
    Matrix out = Matrix::Zero(dim, dim);
    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) {
            const double jij = c.at(i, j);
            if (jij == 0.0) continue;
            detail::add_two_site(out, detail::heisenberg_two_site(), 0.5 * jij, i, j, m);
        }
    return out;
}

/// J^2 in the SWAP form: eta*I + sum_{i<j} J_ij SWAP_ij,
/// with eta = -(1/2) sum_{i<j} J_ij. Returns (operator, eta).
inline std::pair<Matrix, double> build_j_squared_swap(const CouplingMatrix& c) {
    const int m = c.layout.physical_count();
    const std::int64_t dim = operator_dim(m);
    double eta = 0.0;
    Matrix out = Matrix::Zero(dim, dim);
    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) {
            const double jij = c.at(i, j);
            eta -= 0.5 * jij;
            if (jij == 0.0) continue;
            for (std::int64_t b = 0; b < dim; ++b) {
                std::int64_t swapped = set_bit(b, i, m, bit_of(b, j, m));
                swapped = set_bit(swapped, j, m, bit_of(b, i, m));
                out(swapped, b) += jij;
            }
        }
    out.diagonal().array() += eta;
    return {std::move(out), eta};
}

/// H_g = -J^2 + g J_z.
inline Matrix build_hamiltonian(const CouplingMatrix& c, double g) {
    Matrix h = -build_j_squared_pauli(c);
    const int m = c.layout.physical_count();
    for (std::int64_t b = 0; b < h.rows(); ++b)
        h(b, b) += g * (0.5 * m - popcount64(b));
    return h;
}

}  // namespace spinfan
