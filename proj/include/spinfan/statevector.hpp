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
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "spinfan/common.hpp"
#include "spinfan/coupling.hpp"
#include "spinfan/encoding.hpp"
#include "spinfan/layout.hpp"

namespace spinfan {

// States are complex amplitude vectors of length 2^m; qubit 1 is the most
// significant bit of the basis-state label (see common.hpp).

inline int qubit_count(const Vector& state) {
    const auto dim = state.size();
    if (dim < 2 || (dim & (dim - 1)) != 0)
        throw std::invalid_argument("state dimension is not a power of two");
    int m = 0;
    while ((std::int64_t{1} << m) < dim) ++m;
    return m;
}

inline Vector basis_state(int m, std::int64_t index) {
    Vector v = Vector::Zero(dim_for_qubits(m));
    v(index) = 1.0;
    return v;
}

inline Vector basis_state(const BitString& bits) {
    return basis_state(bits.size(), bits.index());
}

inline double fidelity(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("fidelity: dimension mismatch");
    return std::norm(a.dot(b));
}

namespace detail {

// Index plumbing for applying an operator on a qubit subset. Local index
// convention: targets[0] supplies the most significant local bit.
struct SubsetIndexer {
    int m = 0;
    int k = 0;
    std::vector<std::int64_t> offsets;  // 2^k entries: local index -> global offset
    std::vector<std::int64_t> bases;    // 2^(m-k) entries: rest index -> global base

    SubsetIndexer(const std::vector<int>& targets, int m_) : m(m_) {
        k = static_cast<int>(targets.size());
        if (k < 1 || k > m) throw std::invalid_argument("subset: bad target count");
        std::vector<bool> used(m + 1, false);
        for (int q : targets) {
            if (q < 1 || q > m) throw std::out_of_range("subset: target out of range");
            if (used[q]) throw std::invalid_argument("subset: duplicate target");
            used[q] = true;
        }
        offsets.assign(std::size_t{1} << k, 0);
        for (std::int64_t lt = 0; lt < static_cast<std::int64_t>(offsets.size()); ++lt)
            for (int i = 0; i < k; ++i)
                if ((lt >> (k - 1 - i)) & 1)
                    offsets[lt] |= std::int64_t{1} << (m - targets[i]);
        std::vector<int> rest;
        for (int q = 1; q <= m; ++q)
            if (!used[q]) rest.push_back(q);
        bases.assign(std::size_t{1} << (m - k), 0);
        for (std::int64_t r = 0; r < static_cast<std::int64_t>(bases.size()); ++r)
            for (int i = 0; i < m - k; ++i)
                if ((r >> (m - k - 1 - i)) & 1)
                    bases[r] |= std::int64_t{1} << (m - rest[i]);
    }

    Matrix gather(const Vector& state) const {
        Matrix block(offsets.size(), bases.size());
        for (std::size_t r = 0; r < bases.size(); ++r)
            for (std::size_t lt = 0; lt < offsets.size(); ++lt)
                block(lt, r) = state(bases[r] + offsets[lt]);
        return block;
    }

    void scatter(Vector& state, const Matrix& block) const {
        for (std::size_t r = 0; r < bases.size(); ++r)
            for (std::size_t lt = 0; lt < offsets.size(); ++lt)
                state(bases[r] + offsets[lt]) = block(lt, r);
    }
};

}  // namespace detail

/// Apply a dense 2^k x 2^k unitary to the listed target qubits of an m-qubit
/// state; targets[0] is the most significant local bit.
inline Vector apply_on_subset(const Vector& state, const Matrix& u,
                              const std::vector<int>& targets) {
    const int m = qubit_count(state);
    detail::SubsetIndexer idx(targets, m);
    if (u.rows() != u.cols() ||
        u.rows() != static_cast<Eigen::Index>(std::size_t{1} << targets.size()))
        throw std::invalid_argument("apply_on_subset: operator/target mismatch");
    Matrix block = idx.gather(state);
    block = u * block;
    Vector out = state;
    idx.scatter(out, block);
    return out;
}

/// Full 2^m operator acting as U on the target subset and identity elsewhere.
inline Matrix embed_on_subset(const Matrix& u, const std::vector<int>& targets, int m) {
    detail::SubsetIndexer idx(targets, m);
    if (u.rows() != u.cols() ||
        u.rows() != static_cast<Eigen::Index>(std::size_t{1} << targets.size()))
        throw std::invalid_argument("embed_on_subset: operator/target mismatch");
    const std::int64_t dim = dim_for_qubits(m);
    Matrix out = Matrix::Zero(dim, dim);
    for (std::size_t r = 0; r < idx.bases.size(); ++r)
        for (std::size_t lin = 0; lin < idx.offsets.size(); ++lin)
            for (std::size_t lout = 0; lout < idx.offsets.size(); ++lout) {
                const Complex w = u(lout, lin);
                if (w == Complex{}) continue;
                out(idx.bases[r] + idx.offsets[lout], idx.bases[r] + idx.offsets[lin]) = w;
            }
    return out;
}

/// Exact evolution exp(-iHt) via spectral decomposition of a Hermitian H.
/// H_g conserves total Z, so the matrix splits into Hamming-weight sectors;
/// the solver detects that structure (exact zero cross entries) and
/// diagonalizes per sector, falling back to one full block otherwise.
/// The decomposition is computed once and reused for every t and state.
class ExactEvolver {
public:
    explicit ExactEvolver(const Matrix& h, double hermiticity_tol = 1e-12) : dim_(h.rows()) {
        if (dim_ < 1 || dim_ > (std::int64_t{1} << 12))
            throw std::invalid_argument("ExactEvolver: dimension must be in [1, 4096]");
        if (!is_hermitian(h, hermiticity_tol))
            throw std::invalid_argument("ExactEvolver: matrix is not Hermitian");
        decompose(h);
    }

    std::int64_t dim() const { return dim_; }

    Vector evolve(const Vector& v, double t) const {
        if (v.size() != dim_) throw std::invalid_argument("ExactEvolver: state dim mismatch");
        Matrix block = v;
        evolve_block(block, t);
        return block.col(0);
    }

    /// Evolve each column of block in place.
    void evolve_block(Matrix& block, double t) const {
        if (block.rows() != dim_) throw std::invalid_argument("ExactEvolver: block dim mismatch");
        for (const Sector& s : sectors_) {
            const auto n = static_cast<Eigen::Index>(s.indices.size());
            Matrix sub(n, block.cols());
            for (Eigen::Index i = 0; i < n; ++i) sub.row(i) = block.row(s.indices[i]);
            Matrix coeff = s.evecs.adjoint() * sub;
            for (Eigen::Index i = 0; i < n; ++i)
                coeff.row(i) *= std::exp(Complex(0.0, -t * s.evals(i)));
            sub.noalias() = s.evecs * coeff;
            for (Eigen::Index i = 0; i < n; ++i) block.row(s.indices[i]) = sub.row(i);
        }
    }

private:
    struct Sector {
        std::vector<std::int64_t> indices;
        Eigen::VectorXd evals;
        Matrix evecs;
    };

    void decompose(const Matrix& h) {
        std::vector<std::vector<std::int64_t>> groups = sector_indices(h);
        for (auto& indices : groups) {
            const auto n = static_cast<Eigen::Index>(indices.size());
            Matrix sub(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) sub(i, j) = h(indices[i], indices[j]);
            Eigen::SelfAdjointEigenSolver<Matrix> solver(sub);
            if (solver.info() != Eigen::Success)
                throw std::runtime_error("ExactEvolver: eigendecomposition failed");
            sectors_.push_back({std::move(indices), solver.eigenvalues(), solver.eigenvectors()});
        }
    }

    std::vector<std::vector<std::int64_t>> sector_indices(const Matrix& h) const {
        const bool power_of_two = (dim_ & (dim_ - 1)) == 0;
        bool blocked = power_of_two && dim_ > 1;
        if (blocked) {
            for (std::int64_t i = 0; i < dim_ && blocked; ++i)
                for (std::int64_t j = 0; j < dim_; ++j)
                    if (h(i, j) != Complex{} && popcount64(i) != popcount64(j)) {
                        blocked = false;
                        break;
                    }
        }
        std::vector<std::vector<std::int64_t>> groups;
        if (!blocked) {
            groups.emplace_back();
            for (std::int64_t i = 0; i < dim_; ++i) groups.back().push_back(i);
            return groups;
        }
        int m = 0;
        while ((std::int64_t{1} << m) < dim_) ++m;
        groups.resize(m + 1);
        for (std::int64_t i = 0; i < dim_; ++i) groups[popcount64(i)].push_back(i);
        return groups;
    }

    std::int64_t dim_;
    std::vector<Sector> sectors_;
};

/// One-shot exp(-iHt) |state>. Keep an ExactEvolver when evolving repeatedly.
inline Vector evolve_exact(const Vector& state, const Matrix& h, double t) {
    return ExactEvolver(h).evolve(state, t);
}

/// Closed-form phase accumulated by an encoded eigenstate: exp(-i t delta_x).
/// Cross-check partner of evolve_exact; never touches the dense engine.
inline Complex evolve_analytic(const BitString& x, const PairCouplings& c, double g, double t) {
    return std::exp(Complex(0.0, -t * eigen_data(c, g, x).delta_x));
}

inline Complex evolve_analytic(const BitString& x, const CouplingMatrix& c, double g, double t) {
    return evolve_analytic(x, require_pair_structure(c), g, t);
}

/// True iff A = c B entrywise for some unit-modulus c, which is fitted from
/// the largest-modulus entry of B and returned.
inline std::pair<bool, Complex> equal_up_to_global_phase(const Matrix& a, const Matrix& b,
                                                         double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("equal_up_to_global_phase: dimension mismatch");
    Eigen::Index bi = 0, bj = 0;
    b.cwiseAbs().maxCoeff(&bi, &bj);
    if (std::abs(b(bi, bj)) == 0.0) return {max_abs(a) < tol, Complex(1.0, 0.0)};
    Complex c = a(bi, bj) / b(bi, bj);
    if (std::abs(c) == 0.0) c = Complex(1.0, 0.0);
    c /= std::abs(c);
    return {max_abs_diff(a, c * b) < tol, c};
}

inline std::pair<bool, Complex> equal_up_to_global_phase(const Vector& a, const Vector& b,
                                                         double tol) {
    return equal_up_to_global_phase(Matrix(a), Matrix(b), tol);
}

}  // namespace spinfan
