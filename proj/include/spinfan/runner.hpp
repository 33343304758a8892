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

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinfan/circuits.hpp"
#include "spinfan/constraints.hpp"
#include "spinfan/oracles.hpp"

namespace spinfan {

// Pass thresholds, stated in every report so regressions are auditable.
inline constexpr double kPassFidelity = 1.0 - 1e-9;
inline constexpr double kEigenResidualTol = 1e-10;
inline constexpr double kPhaseSpreadTol = 1e-9;
inline constexpr double kNegativeFidelityCeiling = 0.999;

enum class Mode {
    parity,
    fanout,
    ghz,
    modq_generalized,
    modq_standard,
    eigencheck,
    appendix_a,
    appendix_b,
    negative_perturbation,
};

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::parity: return "parity";
        case Mode::fanout: return "fanout";
        case Mode::ghz: return "ghz";
        case Mode::modq_generalized: return "modq-generalized";
        case Mode::modq_standard: return "modq-standard";
        case Mode::eigencheck: return "eigencheck";
        case Mode::appendix_a: return "appendix-a";
        case Mode::appendix_b: return "appendix-b";
        case Mode::negative_perturbation: return "negative-perturbation";
    }
    return "?";
}

inline Mode mode_from_string(const std::string& s) {
    for (Mode m : {Mode::parity, Mode::fanout, Mode::ghz, Mode::modq_generalized,
                   Mode::modq_standard, Mode::eigencheck, Mode::appendix_a, Mode::appendix_b,
                   Mode::negative_perturbation})
        if (s == mode_name(m)) return m;
    throw std::invalid_argument("unknown mode: " + s);
}

struct ExperimentConfig {
    Mode mode = Mode::parity;
    int p = 3;
    int q = 2;  // modq modes
    std::uint64_t seed = 0;
    std::optional<std::string> couplings_path;  // default: sampled per seed
    TimingPlan plan{};                          // parity family
    ModqPlan modq_plan = ModqPlan::basic(2);    // q is synced from this->q at run time
    std::optional<double> g;                    // default: sampled per seed
    double epsilon = 0.1;                       // negative-perturbation magnitude
    std::string perturbation = "external";      // external | k-even | g-offset
    std::optional<int> active;                  // parity active pair (default p)
    int trials = 20;                            // eigencheck / appendix-b instances
    int grid_steps = 32;                        // appendix-a
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j{{"mode", mode_name(c.mode)},
                     {"p", c.p},
                     {"q", c.q},
                     {"seed", c.seed},
                     {"plan", to_json(c.plan)},
                     {"modq_plan", to_json(c.modq_plan)},
                     {"epsilon", c.epsilon},
                     {"perturbation", c.perturbation},
                     {"trials", c.trials},
                     {"grid_steps", c.grid_steps}};
    j["couplings"] = c.couplings_path ? nlohmann::json(*c.couplings_path) : nlohmann::json("sampled");
    j["g"] = c.g ? nlohmann::json(*c.g) : nlohmann::json("sampled");
    j["active"] = c.active ? nlohmann::json(*c.active) : nlohmann::json(nullptr);
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.mode = mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("p")) c.p = j.at("p").get<int>();
    if (j.contains("q")) c.q = j.at("q").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("couplings") && j.at("couplings").is_string() &&
        j.at("couplings").get<std::string>() != "sampled")
        c.couplings_path = j.at("couplings").get<std::string>();
    if (j.contains("plan")) from_json(j.at("plan"), c.plan);
    if (j.contains("modq_plan")) from_json(j.at("modq_plan"), c.modq_plan);
    if (j.contains("g") && j.at("g").is_number()) c.g = j.at("g").get<double>();
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("perturbation")) c.perturbation = j.at("perturbation").get<std::string>();
    if (j.contains("active") && j.at("active").is_number()) c.active = j.at("active").get<int>();
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("grid_steps")) c.grid_steps = j.at("grid_steps").get<int>();
    return c;
}

struct RunReport {
    nlohmann::json config_echo;
    std::vector<std::pair<std::string, double>> per_input;  // label -> fidelity
    double worst_fidelity = 1.0;
    Complex observed_phase{1.0, 0.0};
    double phase_spread = 0.0;
    double worst_ancilla_leak = 0.0;
    nlohmann::json constraints;
    double max_eigen_residual = 0.0;
    bool pass = false;
    double wall_time_s = 0.0;
    nlohmann::json extra;
};

inline nlohmann::json to_json(const RunReport& r) {
    nlohmann::json per_input = nlohmann::json::array();
    for (const auto& [label, fid] : r.per_input)
        per_input.push_back({{"input", label}, {"fidelity", fid}});
    return {{"config", r.config_echo},
            {"per_input", per_input},
            {"worst_fidelity", r.worst_fidelity},
            {"observed_phase", {r.observed_phase.real(), r.observed_phase.imag()}},
            {"phase_spread", r.phase_spread},
            {"worst_ancilla_leak", r.worst_ancilla_leak},
            {"constraints", r.constraints},
            {"max_eigen_residual", r.max_eigen_residual},
            {"pass", r.pass},
            {"wall_time_s", r.wall_time_s},
            {"thresholds",
             {{"pass_fidelity", kPassFidelity},
              {"eigen_residual", kEigenResidualTol},
              {"congruence", kCongruenceTol},
              {"phase_spread", kPhaseSpreadTol},
              {"negative_ceiling", kNegativeFidelityCeiling}}},
            {"extra", r.extra}};
}

namespace detail {

struct SweepAccumulator {
    std::vector<std::pair<std::string, double>> per_input;
    double worst_fidelity = 1.0;
    Complex first_phase{0.0, 0.0};
    double phase_spread = 0.0;
    double worst_leak = 0.0;

    void add(const std::string& label, const Vector& expected, const Vector& out,
             double leak) {
        const Complex overlap = expected.dot(out);
        const double fid = std::norm(overlap);
        per_input.emplace_back(label, fid);
        worst_fidelity = std::min(worst_fidelity, fid);
        worst_leak = std::max(worst_leak, leak);
        if (fid > 0.5) {
            const Complex phase = overlap / std::abs(overlap);
            if (std::abs(first_phase) == 0.0)
                first_phase = phase;
            else
                phase_spread = std::max(phase_spread, std::abs(phase - first_phase));
        }
    }
};

/// 2-norm of the components in which any of the listed wires is nonzero.
inline double leakage_outside_zero(const Vector& state, const std::vector<int>& wires, int m) {
    double sq = 0.0;
    std::int64_t mask = 0;
    for (int w : wires) mask |= std::int64_t{1} << (m - w);
    for (std::int64_t i = 0; i < state.size(); ++i)
        if (i & mask) sq += std::norm(state(i));
    return std::sqrt(sq);
}

inline Vector assignment_state(int m, const std::vector<std::pair<int, int>>& wire_bits) {
    std::int64_t index = 0;
    for (const auto& [wire, bit] : wire_bits) index = set_bit(index, wire, m, bit);
    return basis_state(m, index);
}

inline CouplingMatrix load_couplings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open couplings file: " + path);
    nlohmann::json j;
    in >> j;
    return coupling_matrix_from_json(j);
}

}  // namespace detail

/// Executes the configured experiment end to end: sample/load couplings,
/// check constraints, build the circuit, sweep every computational input,
/// compare against the matching brute-force oracle.
inline RunReport run(const ExperimentConfig& config);

namespace detail {

inline RunReport run_parity_family(const ExperimentConfig& config) {
    RunReport report;
    const int p = config.p;
    if (p < 2 || p > 5)
        throw std::invalid_argument("parity-family runs support 2 <= p <= 5");
    TimingPlan plan = config.plan;
    double g = config.g ? *config.g : sample_field(plan, config.seed);
    CouplingMatrix couplings = config.couplings_path
                                   ? load_couplings(*config.couplings_path)
                                   : sample_couplings(p, plan, config.seed);
    const int active = config.active.value_or(p);
    const bool negative = config.mode == Mode::negative_perturbation;
    if (negative) {
        if (config.perturbation == "external") {
            PairCouplings reduced = require_pair_structure(couplings);
            RealMatrix ext = RealMatrix::Zero(p, p);
            std::vector<double> internal(p);
            for (int u = 1; u <= p; ++u) {
                internal[u - 1] = reduced.jint(u);
                for (int v = u + 1; v <= p; ++v) ext(u - 1, v - 1) = ext(v - 1, u - 1) = reduced.jext(u, v);
            }
            const int other = active == 1 ? 2 : 1;
            ext(other - 1, active - 1) += config.epsilon;
            ext(active - 1, other - 1) += config.epsilon;
            couplings = PairCouplings(p, std::move(ext), std::move(internal)).to_matrix();
        } else if (config.perturbation == "k-even") {
            plan = TimingPlan{2.0 * config.plan.T_prime, config.plan.T_prime, 2};
        } else if (config.perturbation == "g-offset") {
            g += config.epsilon;
        } else {
            throw std::invalid_argument("unknown perturbation: " + config.perturbation);
        }
    }

    const PairCouplings reduced = require_pair_structure(couplings);
    ConstraintReport parity_check = check_parity_couplings(reduced, plan);
    ConstraintReport uncompute_check = check_uncompute_constraints(reduced, plan, g);
    report.constraints = {{"pair_structure", true},
                          {"parity", to_json(parity_check)},
                          {"uncompute", to_json(uncompute_check)}};

    ParityCircuitSpec spec(p, couplings, g, plan, active);
    const bool checked = parity_check.passed && uncompute_check.passed;
    Circuit circuit;
    if (config.mode == Mode::fanout || config.mode == Mode::ghz)
        circuit = checked ? build_fanout_circuit(spec) : build_fanout_circuit_unchecked(spec);
    else
        circuit = checked ? build_parity_circuit(spec) : build_parity_circuit_unchecked(spec);

    const ParityWires wires(p);
    const int m = circuit.qubits;
    SweepAccumulator acc;

    if (config.mode == Mode::ghz) {
        Vector input = basis_state(m, 0);
        input = apply_gate(input, Gate::h(wires.target()));  // control in |+>
        const Vector out = run_circuit(circuit, input);
        Vector expected = Vector::Zero(input.size());
        std::int64_t ones = 0;
        for (int a = 1; a <= p; ++a) ones = set_bit(ones, wires.input(a), m, 1);
        ones = set_bit(ones, wires.target(), m, 1);
        expected(0) = 1.0 / std::sqrt(2.0);
        expected(ones) = 1.0 / std::sqrt(2.0);
        acc.add("ghz", expected, out, leakage_outside_zero(out, circuit.ancilla_wires, m));
    } else {
        const TruthTable oracle =
            (config.mode == Mode::fanout) ? fanout_oracle(p) : parity_oracle(p);
        for (std::int64_t xi = 0; xi < (std::int64_t{1} << p); ++xi)
            for (int t = 0; t < 2; ++t) {
                std::vector<std::pair<int, int>> in_bits;
                for (int a = 1; a <= p; ++a)
                    in_bits.emplace_back(wires.input(a), static_cast<int>((xi >> (p - a)) & 1));
                in_bits.emplace_back(wires.target(), t);
                const Vector input = assignment_state(m, in_bits);
                const Vector out = run_circuit(circuit, input);
                const std::int64_t mapped = oracle.apply(xi * 2 + t);
                std::vector<std::pair<int, int>> out_bits;
                for (int a = 1; a <= p; ++a)
                    out_bits.emplace_back(wires.input(a),
                                          static_cast<int>((mapped >> (p + 1 - a)) & 1));
                out_bits.emplace_back(wires.target(), static_cast<int>(mapped & 1));
                const Vector expected = assignment_state(m, out_bits);
                const std::string label =
                    "x=" + BitString::from_index(xi, p).str() + ",t=" + std::to_string(t);
                acc.add(label, expected, out,
                        leakage_outside_zero(out, circuit.ancilla_wires, m));
            }
    }

    // Closed-form eigen residuals for the same configuration.
    {
        const Matrix j2 = build_j_squared_pauli(couplings);
        const Matrix hg = build_hamiltonian(couplings, g);
        for (std::int64_t xi = 0; xi < (std::int64_t{1} << p); ++xi) {
            const BitString x = BitString::from_index(xi, p);
            const Vector xl = encode_bitstring(x);
            const EigenData ed = eigen_data(reduced, g, x);
            report.max_eigen_residual = std::max(
                {report.max_eigen_residual, eigen_residual(j2, xl, ed.lambda_x),
                 eigen_residual(hg, xl, ed.delta_x)});
        }
    }

    report.per_input = std::move(acc.per_input);
    report.worst_fidelity = acc.worst_fidelity;
    report.observed_phase = acc.first_phase;
    report.phase_spread = acc.phase_spread;
    report.worst_ancilla_leak = acc.worst_leak;
    if (negative)
        report.pass = report.worst_fidelity < kNegativeFidelityCeiling;
    else
        report.pass = checked && report.worst_fidelity >= kPassFidelity &&
                      report.phase_spread < kPhaseSpreadTol &&
                      report.max_eigen_residual < kEigenResidualTol;
    return report;
}

inline RunReport run_modq(const ExperimentConfig& config) {
    RunReport report;
    const int p = config.p;
    const int q = config.q;
    ModqPlan plan = config.modq_plan;
    plan.q = q;
    if (plan.k_triple_prime % q != q - 1) plan.k_triple_prime = q - 1;
    const int z = p + q - 1;
    if (p < 1 || q < 2 || z > 6)
        throw std::invalid_argument("modq runs require p >= 1, q >= 2, z = p+q-1 <= 6");
    const double g = config.g ? *config.g : sample_field(plan, config.seed);
    CouplingMatrix couplings = config.couplings_path
                                   ? load_couplings(*config.couplings_path)
                                   : sample_couplings(z, plan, config.seed);
    const PairCouplings reduced = require_pair_structure(couplings);
    ConstraintReport check = check_modq_couplings(reduced, plan, g);
    report.constraints = {{"pair_structure", true}, {"modq", to_json(check)}};
    if (!check.passed) {
        report.pass = false;
        return report;
    }

    ModqCircuitSpec spec(p, q, couplings, g, plan);
    const bool standard = config.mode == Mode::modq_standard;
    const Circuit circuit =
        standard ? build_standard_modq_circuit(spec) : build_generalized_modq_circuit(spec);
    const ModqWires wires(p, q);
    const int m = circuit.qubits;
    const Vector a_state = prepare_ancilla_state(q).state;
    const TruthTable oracle = modq_oracle(p, q, !standard);

    // Gram-matrix deviation of the Phi states from the Kronecker-delta pattern.
    {
        const std::vector<Vector> phis = compute_phi_states(reduced, g, plan, p, q);
        double worst = 0.0;
        for (std::size_t i = 0; i < phis.size(); ++i)
            for (std::size_t j = 0; j < phis.size(); ++j) {
                const double target = i == j ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(std::abs(phis[i].dot(phis[j])) - target));
            }
        report.extra["phi_gram_deviation"] = worst;
    }

    std::vector<int> must_be_zero;  // encoding ancillas, plus intermediate targets (standard)
    for (int a = 1; a <= z; ++a) must_be_zero.push_back(wires.enc(a));
    if (standard)
        for (int j = 1; j <= q - 1; ++j) must_be_zero.push_back(wires.target(j));

    SweepAccumulator acc;
    const int target_bits = standard ? 1 : q - 1;
    for (std::int64_t xi = 0; xi < (std::int64_t{1} << p); ++xi)
        for (std::int64_t ti = 0; ti < (std::int64_t{1} << target_bits); ++ti) {
            std::vector<std::pair<int, int>> in_bits;
            for (int a = 1; a <= p; ++a)
                in_bits.emplace_back(wires.control(a), static_cast<int>((xi >> (p - a)) & 1));
            if (standard)
                in_bits.emplace_back(wires.final_target(), static_cast<int>(ti & 1));
            else
                for (int j = 1; j <= q - 1; ++j)
                    in_bits.emplace_back(wires.target(j),
                                         static_cast<int>((ti >> (q - 1 - j)) & 1));
            const Vector input = assignment_state(m, in_bits);
            const Vector out = run_circuit(circuit, input);

            const std::int64_t mapped = oracle.apply((xi << target_bits) | ti);
            const std::int64_t t_out = mapped & ((std::int64_t{1} << target_bits) - 1);
            // Expected register: |x> (x) |A> (x) |0 enc> (x) [|0 mid>] (x) targets.
            Vector expected = kron(basis_state(p, xi), a_state);
            expected = kron(expected, basis_state(z, 0));
            if (standard) expected = kron(expected, basis_state(q - 1, 0));
            expected = kron(expected, basis_state(target_bits, t_out));
            const std::string label = "x=" + BitString::from_index(xi, p).str() +
                                      ",t=" + std::to_string(ti);
            acc.add(label, expected, out, leakage_outside_zero(out, must_be_zero, m));
        }

    report.per_input = std::move(acc.per_input);
    report.worst_fidelity = acc.worst_fidelity;
    report.observed_phase = acc.first_phase;
    report.phase_spread = acc.phase_spread;
    report.worst_ancilla_leak = acc.worst_leak;
    const double gram = report.extra["phi_gram_deviation"].get<double>();
    report.pass = report.worst_fidelity >= kPassFidelity &&
                  report.phase_spread < kPhaseSpreadTol && gram < 1e-9;
    return report;
}

inline RunReport run_eigencheck(const ExperimentConfig& config) {
    RunReport report;
    const int p = config.p;
    if (p < 2 || p > 5) throw std::invalid_argument("eigencheck supports 2 <= p <= 5");
    if (config.trials < 1) throw std::invalid_argument("eigencheck: trials >= 1");
    for (int trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(trial);
        const CouplingMatrix couplings = sample_couplings(p, config.plan, seed);
        const double g = config.g ? *config.g : sample_field(config.plan, seed);
        const PairCouplings reduced = require_pair_structure(couplings);
        const Matrix j2 = build_j_squared_pauli(couplings);
        const Matrix hg = build_hamiltonian(couplings, g);
        for (std::int64_t xi = 0; xi < (std::int64_t{1} << p); ++xi) {
            const BitString x = BitString::from_index(xi, p);
            const Vector xl = encode_bitstring(x);
            const EigenData ed = eigen_data(reduced, g, x);
            const double r1 = eigen_residual(j2, xl, ed.lambda_x);
            const double r2 = eigen_residual(hg, xl, ed.delta_x);
            report.max_eigen_residual = std::max({report.max_eigen_residual, r1, r2});
        }
    }
    report.constraints = {{"pair_structure", true}};
    report.extra = {{"trials", config.trials}};
    report.pass = report.max_eigen_residual < kEigenResidualTol;
    return report;
}

inline RunReport run_appendix_a(const ExperimentConfig& config) {
    RunReport report;
    if (config.p < 2 || config.p > 5)
        throw std::invalid_argument("appendix-a supports 2 <= p <= 5");
    const CouplingMatrix couplings = config.couplings_path
                                         ? load_couplings(*config.couplings_path)
                                         : sample_couplings(config.p, config.plan, config.seed);
    const AppendixAScan scan =
        appendix_a_necessity_scan(config.p, couplings, alpha_beta_grid(config.grid_steps));
    report.extra = to_json(scan);
    report.constraints = {{"pair_structure", true}};
    report.pass = scan.singlet_ok && scan.off_singlet_ok;
    return report;
}

inline RunReport run_appendix_b(const ExperimentConfig& config) {
    RunReport report;
    const int p = config.p;
    if (p < 3 || p > 6) throw std::invalid_argument("appendix-b supports 3 <= p <= 6");
    if (config.trials < 1) throw std::invalid_argument("appendix-b: trials >= 1");
    double max_residual = 0.0;
    bool all_consistent = true;
    nlohmann::json instances = nlohmann::json::array();
    for (int trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(trial);
        const PairCouplings reduced =
            require_pair_structure(sample_couplings(p, config.plan, seed));
        const AppendixBReport rep = appendix_b_witness(reduced);
        max_residual = std::max(max_residual, rep.max_identity_residual);
        bool ext_equal = true, int_equal = true;
        for (int u = 1; u <= p && ext_equal; ++u)
            for (int v = u + 1; v <= p; ++v)
                if (std::abs(reduced.jext(u, v) - reduced.jext(1, 2)) > 1e-12) {
                    ext_equal = false;
                    break;
                }
        for (int a = 2; a <= p; ++a)
            if (std::abs(reduced.jint(a) - reduced.jint(1)) > 1e-12) int_equal = false;
        const bool expect_witness = !(ext_equal && int_equal);
        if (rep.witness_found != expect_witness) all_consistent = false;
        instances.push_back(to_json(rep));
    }
    report.max_eigen_residual = max_residual;
    report.extra = {{"instances", instances}, {"max_identity_residual", max_residual}};
    report.constraints = {{"pair_structure", true}};
    report.pass = max_residual < 1e-10 && all_consistent;
    return report;
}

}  // namespace detail

inline RunReport run(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    switch (config.mode) {
        case Mode::parity:
        case Mode::fanout:
        case Mode::ghz:
        case Mode::negative_perturbation:
            report = detail::run_parity_family(config);
            break;
        case Mode::modq_generalized:
        case Mode::modq_standard:
            report = detail::run_modq(config);
            break;
        case Mode::eigencheck:
            report = detail::run_eigencheck(config);
            break;
        case Mode::appendix_a:
            report = detail::run_appendix_a(config);
            break;
        case Mode::appendix_b:
            report = detail::run_appendix_b(config);
            break;
    }
    report.config_echo = to_json(config);
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

/// Robustness sweep: rows (value, worst_fidelity) for a perturbation variable
/// in {epsilon, T-offset, g-offset} applied to a parity/fanout baseline.
inline void emit_sweep_csv(const ExperimentConfig& base, const std::string& variable,
                           const std::vector<double>& values, std::ostream& out) {
    if (values.empty()) throw std::invalid_argument("emit_sweep_csv: empty sweep range");
    if (base.mode != Mode::parity && base.mode != Mode::fanout)
        throw std::invalid_argument("emit_sweep_csv: baseline mode must be parity or fanout");
    if (variable != "epsilon" && variable != "T-offset" && variable != "g-offset")
        throw std::invalid_argument("emit_sweep_csv: unknown variable " + variable);
    out << "value,worst_fidelity\n";
    for (double value : values) {
        const int p = base.p;
        TimingPlan plan = base.plan;
        double g = base.g ? *base.g : sample_field(plan, base.seed);
        CouplingMatrix couplings = base.couplings_path
                                       ? detail::load_couplings(*base.couplings_path)
                                       : sample_couplings(p, plan, base.seed);
        const int active = base.active.value_or(p);
        if (variable == "epsilon" && value != 0.0) {
            PairCouplings reduced = require_pair_structure(couplings);
            RealMatrix ext = RealMatrix::Zero(p, p);
            std::vector<double> internal(p);
            for (int u = 1; u <= p; ++u) {
                internal[u - 1] = reduced.jint(u);
                for (int v = u + 1; v <= p; ++v)
                    ext(u - 1, v - 1) = ext(v - 1, u - 1) = reduced.jext(u, v);
            }
            const int other = active == 1 ? 2 : 1;
            ext(other - 1, active - 1) += value;
            ext(active - 1, other - 1) += value;
            couplings = PairCouplings(p, std::move(ext), std::move(internal)).to_matrix();
        } else if (variable == "T-offset") {
            plan.T += value;
        } else if (variable == "g-offset") {
            g += value;
        }
        ParityCircuitSpec spec(p, couplings, g, plan, active);
        const Circuit circuit = base.mode == Mode::fanout
                                    ? build_fanout_circuit_unchecked(spec)
                                    : build_parity_circuit_unchecked(spec);
        const ParityWires wires(p);
        const TruthTable oracle =
            base.mode == Mode::fanout ? fanout_oracle(p) : parity_oracle(p);
        double worst = 1.0;
        for (std::int64_t xi = 0; xi < (std::int64_t{1} << p); ++xi)
            for (int t = 0; t < 2; ++t) {
                std::vector<std::pair<int, int>> in_bits;
                for (int a = 1; a <= p; ++a)
                    in_bits.emplace_back(wires.input(a), static_cast<int>((xi >> (p - a)) & 1));
                in_bits.emplace_back(wires.target(), t);
                const Vector input = detail::assignment_state(circuit.qubits, in_bits);
                const Vector out = run_circuit(circuit, input);
                const std::int64_t mapped = oracle.apply(xi * 2 + t);
                std::vector<std::pair<int, int>> out_bits;
                for (int a = 1; a <= p; ++a)
                    out_bits.emplace_back(wires.input(a),
                                          static_cast<int>((mapped >> (p + 1 - a)) & 1));
                out_bits.emplace_back(wires.target(), static_cast<int>(mapped & 1));
                const Vector expected = detail::assignment_state(circuit.qubits, out_bits);
                worst = std::min(worst, std::norm(expected.dot(out)));
            }
        out << value << "," << worst << "\n";
    }
}

}  // namespace spinfan
