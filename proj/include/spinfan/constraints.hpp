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
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinfan/common.hpp"
#include "spinfan/coupling.hpp"

namespace spinfan {

// Default tolerance for the numeric congruence checks. Generated couplings are
// exact rational multiples of pi up to double rounding, so 1e-9 separates a
// pass from the 0.1-sized perturbations used in negative tests by eight
// orders of magnitude.
inline constexpr double kCongruenceTol = 1e-9;

/// a == b (mod modulus): true iff (a - b)/modulus is within tol of an integer.
inline bool congruent(double a, double b, double modulus, double tol = kCongruenceTol) {
    if (modulus == 0.0) throw std::invalid_argument("congruent: modulus must be nonzero");
    if (tol < 0.0) throw std::invalid_argument("congruent: tol must be nonnegative");
    const double r = (a - b) / modulus;
    return std::abs(r - std::round(r)) <= tol;
}

/// Evolution times for the forward (T) and uncompute (T') evolutions,
/// with T = k T' for an odd integer k.
struct TimingPlan {
    double T = 1.0;
    double T_prime = 1.0;
    int k = 1;

    bool well_formed(double tol = 1e-12) const {
        return T > 0.0 && T_prime > 0.0 && k > 0 && (k % 2 == 1) &&
               std::abs(T - k * T_prime) < tol;
    }

    static TimingPlan from_k(double t_prime, int k) { return {k * t_prime, t_prime, k}; }
};

/// Evolution time and congruence integers for the Mod_q construction:
/// T' = k''' T with k''' = q-1 (mod q), and gcd(k, q) = 1.
struct ModqPlan {
    int q = 2;
    int k = 1;               // external-coupling residue numerator, coprime to q
    int k_prime = 0;         // internal-coupling residue numerator
    int k_double_prime = 0;  // field residue numerator
    int k_triple_prime = 1;  // uncompute multiplier, k''' = q-1 (mod q)
    double T = 1.0;

    double T_prime() const { return k_triple_prime * T; }

    bool well_formed() const {
        return q >= 2 && k > 0 && std::gcd(k, q) == 1 && T > 0.0 && k_triple_prime > 0 &&
               k_triple_prime % q == q - 1;
    }

    static ModqPlan basic(int q, double t = 1.0, int k = 1, int k_prime = 0,
                          int k_double_prime = 0) {
        return {q, k, k_prime, k_double_prime, q - 1, t};
    }
};

/// Result of a constraint check; passed iff no violations were recorded.
struct ConstraintReport {
    struct Violation {
        std::string constraint;  // which condition failed
        int pair_u = 0;          // 0 when not pair-specific
        int pair_v = 0;
        double residual = 0.0;   // distance of the ratio from the nearest integer
    };
    bool passed = true;
    std::vector<Violation> violations;

    void add(std::string constraint, int u, int v, double residual) {
        passed = false;
        violations.push_back({std::move(constraint), u, v, residual});
    }
};

namespace detail {

inline double congruence_residual(double a, double b, double modulus) {
    const double r = (a - b) / modulus;
    return std::abs(r - std::round(r));
}

}  // namespace detail

/// Parity needs T Jext(f,l) == pi/2 (mod pi) for every distinct f, l.
inline ConstraintReport check_parity_couplings(const PairCouplings& c, const TimingPlan& plan,
                                               double tol = kCongruenceTol) {
    ConstraintReport report;
    for (int f = 1; f <= c.pairs(); ++f)
        for (int l = f + 1; l <= c.pairs(); ++l)
            if (!congruent(plan.T * c.jext(f, l), pi / 2, pi, tol))
                report.add("T*Jext == pi/2 (mod pi)", f, l,
                           detail::congruence_residual(plan.T * c.jext(f, l), pi / 2, pi));
    return report;
}

inline ConstraintReport check_parity_couplings(const CouplingMatrix& c, const TimingPlan& plan,
                                               double tol = kCongruenceTol) {
    return check_parity_couplings(require_pair_structure(c), plan, tol);
}

/// Conditions under which evolving the same Hamiltonian for T' inverts the
/// forward evolution on the encoded subspace:
///   1. T = k T' with k odd;
///   2. T' Jext(f,l) == pi/2 (mod pi) for every distinct f, l;
///   3. T' Jint(f)   == 0    (mod pi) for every f;
///   4. T' g         == 0    (mod pi).
inline ConstraintReport check_uncompute_constraints(const PairCouplings& c,
                                                    const TimingPlan& plan, double g,
                                                    double tol = kCongruenceTol) {
    ConstraintReport report;
    if (!plan.well_formed())
        report.add("T = k*T' with k odd", 0, 0, std::abs(plan.T - plan.k * plan.T_prime));
    for (int f = 1; f <= c.pairs(); ++f)
        for (int l = f + 1; l <= c.pairs(); ++l)
            if (!congruent(plan.T_prime * c.jext(f, l), pi / 2, pi, tol))
                report.add("T'*Jext == pi/2 (mod pi)", f, l,
                           detail::congruence_residual(plan.T_prime * c.jext(f, l), pi / 2, pi));
    for (int f = 1; f <= c.pairs(); ++f)
        if (!congruent(plan.T_prime * c.jint(f), 0.0, pi, tol))
            report.add("T'*Jint == 0 (mod pi)", f, f,
                       detail::congruence_residual(plan.T_prime * c.jint(f), 0.0, pi));
    if (!congruent(plan.T_prime * g, 0.0, pi, tol))
        report.add("T'*g == 0 (mod pi)", 0, 0,
                   detail::congruence_residual(plan.T_prime * g, 0.0, pi));
    return report;
}

inline ConstraintReport check_uncompute_constraints(const CouplingMatrix& c,
                                                    const TimingPlan& plan, double g,
                                                    double tol = kCongruenceTol) {
    return check_uncompute_constraints(require_pair_structure(c), plan, g, tol);
}

/// Mod_q conditions over z = p+q-1 pairs:
///   2T Jext(f,l) == 2pi k/q   (mod 2pi) for every distinct f, l, gcd(k,q)=1;
///   T  Jint(f)   == 2pi k'/q  (mod 2pi) for every f;
///   T  g         == 2pi k''/q (mod 2pi).
/// An ill-formed plan (gcd(k,q) != 1 or k''' != q-1 mod q) is itself reported
/// as a violation.
inline ConstraintReport check_modq_couplings(const PairCouplings& c, const ModqPlan& plan,
                                             double g, double tol = kCongruenceTol) {
    ConstraintReport report;
    if (!plan.well_formed()) {
        report.add("modq plan: gcd(k,q) = 1 and k''' == q-1 (mod q)", 0, 0, 0.0);
        return report;
    }
    const double ext_target = 2.0 * pi * plan.k / plan.q;
    for (int f = 1; f <= c.pairs(); ++f)
        for (int l = f + 1; l <= c.pairs(); ++l)
            if (!congruent(2.0 * plan.T * c.jext(f, l), ext_target, 2.0 * pi, tol))
                report.add("2T*Jext == 2pi*k/q (mod 2pi)", f, l,
                           detail::congruence_residual(2.0 * plan.T * c.jext(f, l), ext_target,
                                                       2.0 * pi));
    const double int_target = 2.0 * pi * plan.k_prime / plan.q;
    for (int f = 1; f <= c.pairs(); ++f)
        if (!congruent(plan.T * c.jint(f), int_target, 2.0 * pi, tol))
            report.add("T*Jint == 2pi*k'/q (mod 2pi)", f, f,
                       detail::congruence_residual(plan.T * c.jint(f), int_target, 2.0 * pi));
    if (!congruent(plan.T * g, 2.0 * pi * plan.k_double_prime / plan.q, 2.0 * pi, tol))
        report.add("T*g == 2pi*k''/q (mod 2pi)", 0, 0,
                   detail::congruence_residual(plan.T * g,
                                               2.0 * pi * plan.k_double_prime / plan.q, 2.0 * pi));
    return report;
}

inline ConstraintReport check_modq_couplings(const CouplingMatrix& c, const ModqPlan& plan,
                                             double g, double tol = kCongruenceTol) {
    return check_modq_couplings(require_pair_structure(c), plan, g, tol);
}

enum class CouplingKind { parity, modq };

/// Inclusive range for the random integer multipliers in sample_couplings.
struct MagnitudeRange {
    int lo = 0;
    int hi = 4;
};

/// Draws a pair-structured coupling matrix with unequal couplings satisfying
/// the requested constraint family. Deterministic per seed.
///
/// Parity kind (plan = TimingPlan): Jext(u,v) = (pi/2 + m_uv pi)/T' and
/// Jint(a) = m_a pi/T' with m_a != 0; T = kT' with k odd then gives
/// T*Jext == pi/2 (mod pi) as well, so both the parity and the uncompute
/// checkers accept the result.
///
/// Modq kind (plan = ModqPlan): Jext(u,v) = (pi k/q + m_uv pi)/T and
/// Jint(a) = (2pi k'/q + 2pi m_a)/T, nonzero.
inline CouplingMatrix sample_couplings(int z, const TimingPlan& plan, std::uint64_t seed,
                                       MagnitudeRange range = {}) {
    if (z < 2) throw std::invalid_argument("sample_couplings: need z >= 2");
    if (range.hi < range.lo) throw std::invalid_argument("sample_couplings: empty range");
    if (!plan.well_formed()) throw std::invalid_argument("sample_couplings: ill-formed plan");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> draw(range.lo, range.hi);
    RealMatrix ext = RealMatrix::Zero(z, z);
    for (int u = 0; u < z; ++u)
        for (int v = u + 1; v < z; ++v)
            ext(u, v) = ext(v, u) = (pi / 2 + draw(rng) * pi) / plan.T_prime;
    if (range.lo == 0 && range.hi == 0)
        throw std::invalid_argument("sample_couplings: cannot draw nonzero internal couplings");
    std::vector<double> internal(z);
    for (int a = 0; a < z; ++a) {
        int mult = draw(rng);
        while (mult == 0) mult = draw(rng);  // internal couplings are nonzero
        internal[a] = mult * pi / plan.T_prime;
    }
    return PairCouplings(z, std::move(ext), std::move(internal)).to_matrix();
}

inline CouplingMatrix sample_couplings(int z, const ModqPlan& plan, std::uint64_t seed,
                                       MagnitudeRange range = {}) {
    if (z < 2) throw std::invalid_argument("sample_couplings: need z >= 2");
    if (range.hi < range.lo) throw std::invalid_argument("sample_couplings: empty range");
    if (!plan.well_formed()) throw std::invalid_argument("sample_couplings: ill-formed plan");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> draw(range.lo, range.hi);
    RealMatrix ext = RealMatrix::Zero(z, z);
    for (int u = 0; u < z; ++u)
        for (int v = u + 1; v < z; ++v)
            ext(u, v) = ext(v, u) = (pi * plan.k / plan.q + draw(rng) * pi) / plan.T;
    if (plan.k_prime % plan.q == 0 && range.lo == 0 && range.hi == 0)
        throw std::invalid_argument("sample_couplings: cannot draw nonzero internal couplings");
    std::vector<double> internal(z);
    for (int a = 0; a < z; ++a) {
        double value = 0.0;
        while (value == 0.0)  // internal couplings are nonzero
            value = (2.0 * pi * plan.k_prime / plan.q + 2.0 * pi * draw(rng)) / plan.T;
        internal[a] = value;
    }
    return PairCouplings(z, std::move(ext), std::move(internal)).to_matrix();
}

/// A field strength compatible with the uncompute constraints: g = m pi/T'.
inline double sample_field(const TimingPlan& plan, std::uint64_t seed, MagnitudeRange range = {}) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<int> draw(range.lo, range.hi);
    return draw(rng) * pi / plan.T_prime;
}

/// A field strength compatible with the Mod_q constraints: Tg = 2pi k''/q + 2pi m.
inline double sample_field(const ModqPlan& plan, std::uint64_t seed, MagnitudeRange range = {}) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<int> draw(range.lo, range.hi);
    return (2.0 * pi * plan.k_double_prime / plan.q + 2.0 * pi * draw(rng)) / plan.T;
}

inline nlohmann::json to_json(const TimingPlan& p) {
    return {{"T", p.T}, {"T_prime", p.T_prime}, {"k", p.k}};
}

inline void from_json(const nlohmann::json& j, TimingPlan& p) {
    p.T = j.at("T").get<double>();
    p.T_prime = j.at("T_prime").get<double>();
    p.k = j.at("k").get<int>();
}

inline nlohmann::json to_json(const ModqPlan& p) {
    return {{"q", p.q},
            {"k", p.k},
            {"k_prime", p.k_prime},
            {"k_double_prime", p.k_double_prime},
            {"k_triple_prime", p.k_triple_prime},
            {"T", p.T}};
}

inline void from_json(const nlohmann::json& j, ModqPlan& p) {
    p.q = j.at("q").get<int>();
    p.k = j.at("k").get<int>();
    p.k_prime = j.at("k_prime").get<int>();
    p.k_double_prime = j.at("k_double_prime").get<int>();
    p.k_triple_prime = j.at("k_triple_prime").get<int>();
    p.T = j.at("T").get<double>();
}

inline nlohmann::json to_json(const ConstraintReport& r) {
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : r.violations)
        violations.push_back({{"constraint", v.constraint},
                              {"pair_u", v.pair_u},
                              {"pair_v", v.pair_v},
                              {"residual", v.residual}});
    return {{"passed", r.passed}, {"violations", violations}};
}

}  // namespace spinfan
