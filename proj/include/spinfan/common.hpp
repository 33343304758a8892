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

#include <bit>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spinfan {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double pi = std::numbers::pi;

// Qubit indices are 1-based throughout, and qubit 1 is the most significant
// bit of a basis-state label: |x_1 x_2 ... x_m> has index sum_i x_i 2^(m-i).
inline int bit_of(std::int64_t basis_index, int qubit, int m) {
    return static_cast<int>((basis_index >> (m - qubit)) & 1);
}

inline std::int64_t set_bit(std::int64_t basis_index, int qubit, int m, int value) {
    const std::int64_t mask = std::int64_t{1} << (m - qubit);
    return value ? (basis_index | mask) : (basis_index & ~mask);
}

inline std::int64_t dim_for_qubits(int m) {
    if (m < 0 || m > 30)
        throw std::invalid_argument("qubit count out of range: " + std::to_string(m));
    return std::int64_t{1} << m;
}

inline int popcount64(std::int64_t v) { return std::popcount(static_cast<std::uint64_t>(v)); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    return (a - b).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& a, double tol = 1e-12) {
    return a.rows() == a.cols() && max_abs_diff(a, a.adjoint()) < tol;
}

inline bool is_unitary(const Matrix& u, double tol = 1e-12) {
    if (u.rows() != u.cols()) return false;
    Matrix gram = u.adjoint() * u;
    gram -= Matrix::Identity(u.rows(), u.cols());
    return max_abs(gram) < tol;
}

}  // namespace spinfan
