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

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinfan/common.hpp"
#include "spinfan/layout.hpp"

namespace spinfan {

/// Symmetric pairwise coupling strengths J_ij over 2p physical qubits,
/// in radians per unit time. Zero diagonal.
struct CouplingMatrix {
    PairLayout layout;
    RealMatrix J;

    CouplingMatrix(PairLayout lay, RealMatrix j) : layout(lay), J(std::move(j)) {
        const int n = layout.physical_count();
        if (J.rows() != n || J.cols() != n)
            throw std::invalid_argument("CouplingMatrix: J must be 2p x 2p");
        for (int i = 0; i < n; ++i) {
            if (J(i, i) != 0.0)
                throw std::invalid_argument("CouplingMatrix: diagonal must be zero");
            for (int j2 = i + 1; j2 < n; ++j2)
                if (J(i, j2) != J(j2, i))
                    throw std::invalid_argument("CouplingMatrix: J must be symmetric");
        }
    }

    int pairs() const { return layout.pairs; }
    // Physical-qubit accessor, 1-based.
    double at(int i, int j) const { return J(i - 1, j - 1); }
};

/// Reduced view of a pair-structured matrix: one external coupling per pair
/// of pairs and one internal coupling per pair.
class PairCouplings {
public:
    PairCouplings(int p, RealMatrix external, std::vector<double> internal)
        : p_(p), ext_(std::move(external)), int_(std::move(internal)) {
        if (p < 1) throw std::invalid_argument("PairCouplings: p >= 1 required");
        if (ext_.rows() != p || ext_.cols() != p || static_cast<int>(int_.size()) != p)
            throw std::invalid_argument("PairCouplings: shape mismatch");
        for (int u = 0; u < p; ++u) {
            if (ext_(u, u) != 0.0)
                throw std::invalid_argument("PairCouplings: external diagonal must be zero");
            for (int v = u + 1; v < p; ++v)
                if (ext_(u, v) != ext_(v, u))
                    throw std::invalid_argument("PairCouplings: external table must be symmetric");
        }
    }

    int pairs() const { return p_; }
    double jext(int u, int v) const {
        if (u == v) throw std::invalid_argument("jext: pairs must be distinct");
        return ext_(u - 1, v - 1);
    }
    double jint(int a) const { return int_.at(a - 1); }

    /// Expand back to the full (2p)x(2p) physical matrix.
    CouplingMatrix to_matrix() const {
        PairLayout lay(p_);
        RealMatrix J = RealMatrix::Zero(2 * p_, 2 * p_);
        for (int u = 1; u <= p_; ++u) {
            J(lay.first(u) - 1, lay.second(u) - 1) = jint(u);
            J(lay.second(u) - 1, lay.first(u) - 1) = jint(u);
            for (int v = u + 1; v <= p_; ++v) {
                const double e = jext(u, v);
                for (int i : {lay.first(u), lay.second(u)})
                    for (int j : {lay.first(v), lay.second(v)}) {
                        J(i - 1, j - 1) = e;
                        J(j - 1, i - 1) = e;
                    }
            }
        }
        return CouplingMatrix(lay, std::move(J));
    }

private:
    int p_;
    RealMatrix ext_;
    std::vector<double> int_;
};

/// Outcome of validate_pair_structure. On failure, the first violating
/// quadruple of external entries is reported.
struct StructureReport {
    bool passed = false;
    struct Violation {
        int pair_u = 0, pair_v = 0;
        std::array<double, 4> values{};  // J[u1v1], J[u1v2], J[u2v1], J[u2v2]
    };
    std::optional<Violation> violation;
    std::optional<PairCouplings> reduced;
};

/// A matrix is pair-structured when, for every distinct pair (u, v), the four
/// cross couplings J[u1v1] = J[u1v2] = J[u2v1] = J[u2v2] agree within tol.
inline StructureReport validate_pair_structure(const CouplingMatrix& c, double tol = 1e-12) {
    const int p = c.pairs();
    const PairLayout& lay = c.layout;
    StructureReport report;
    RealMatrix ext = RealMatrix::Zero(p, p);
    std::vector<double> internal(p);
    for (int a = 1; a <= p; ++a) internal[a - 1] = c.at(lay.first(a), lay.second(a));
    for (int u = 1; u <= p; ++u) {
        for (int v = u + 1; v <= p; ++v) {
            const std::array<double, 4> vals = {
                c.at(lay.first(u), lay.first(v)), c.at(lay.first(u), lay.second(v)),
                c.at(lay.second(u), lay.first(v)), c.at(lay.second(u), lay.second(v))};
            for (double w : vals) {
                if (std::abs(w - vals[0]) >= tol) {
                    report.passed = false;
                    report.violation = StructureReport::Violation{u, v, vals};
                    return report;
                }
            }
            ext(u - 1, v - 1) = ext(v - 1, u - 1) = vals[0];
        }
    }
    report.passed = true;
    report.reduced = PairCouplings(p, std::move(ext), std::move(internal));
    return report;
}

/// Validate and return the reduced view, throwing on failure.
inline PairCouplings require_pair_structure(const CouplingMatrix& c, double tol = 1e-12) {
    StructureReport r = validate_pair_structure(c, tol);
    if (!r.passed) {
        const auto& v = *r.violation;
        throw std::invalid_argument("couplings are not pair-structured: pairs (" +
                                    std::to_string(v.pair_u) + "," + std::to_string(v.pair_v) +
                                    ") have unequal external entries");
    }
    return *std::move(r.reduced);
}

// JSON form. Pair-structured input:
//   {"p": 3, "external": [[1,2,J12],[1,3,J13],[2,3,J23]], "internal": [J1,J2,J3]}
// Raw input requiring validation: {"raw": [[...], ...]}.
inline nlohmann::json to_json(const PairCouplings& pc) {
    nlohmann::json ext = nlohmann::json::array();
    for (int u = 1; u <= pc.pairs(); ++u)
        for (int v = u + 1; v <= pc.pairs(); ++v)
            ext.push_back({u, v, pc.jext(u, v)});
    nlohmann::json internal = nlohmann::json::array();
    for (int a = 1; a <= pc.pairs(); ++a) internal.push_back(pc.jint(a));
    return {{"p", pc.pairs()}, {"external", ext}, {"internal", internal}};
}

inline CouplingMatrix coupling_matrix_from_json(const nlohmann::json& j) {
    if (j.contains("raw")) {
        const auto& rows = j.at("raw");
        const int n = static_cast<int>(rows.size());
        if (n < 2 || n % 2 != 0)
            throw std::invalid_argument("couplings JSON: raw matrix must be 2p x 2p, p >= 1");
        RealMatrix J(n, n);
        for (int r = 0; r < n; ++r) {
            if (static_cast<int>(rows[r].size()) != n)
                throw std::invalid_argument("couplings JSON: raw matrix must be square");
            for (int c = 0; c < n; ++c) J(r, c) = rows[r][c].get<double>();
        }
        return CouplingMatrix(PairLayout(n / 2), std::move(J));
    }
    const int p = j.at("p").get<int>();
    RealMatrix ext = RealMatrix::Zero(p, p);
    for (const auto& entry : j.at("external")) {
        const int u = entry.at(0).get<int>();
        const int v = entry.at(1).get<int>();
        if (u < 1 || v < 1 || u > p || v > p || u == v)
            throw std::invalid_argument("couplings JSON: bad external pair indices");
        ext(u - 1, v - 1) = ext(v - 1, u - 1) = entry.at(2).get<double>();
    }
    std::vector<double> internal = j.at("internal").get<std::vector<double>>();
    return PairCouplings(p, std::move(ext), std::move(internal)).to_matrix();
}

}  // namespace spinfan
