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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spinfan/spinfan.hpp"

namespace {

using namespace spinfan;

// exit codes: 0 pass, 1 test failure, 2 usage/config error
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Flags {
    std::string config_path;
    std::string report_path;
    std::string couplings_path;
    std::string csv_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> p, q, active, trials, grid_steps, k;
    std::optional<double> g, t, t_prime, epsilon;
    std::string perturbation;
    bool standard = false;
    // sweep
    std::string variable;
    double from = 0.0, to = 0.0, step = 0.0;
    std::string baseline = "parity";
};

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

ExperimentConfig assemble_config(Mode mode, const Flags& f) {
    ExperimentConfig cfg;
    if (!f.config_path.empty()) cfg = config_from_json(load_json(f.config_path));
    cfg.mode = mode;
    if (f.seed) cfg.seed = *f.seed;
    if (f.p) cfg.p = *f.p;
    if (f.q) cfg.q = *f.q;
    if (!f.couplings_path.empty()) cfg.couplings_path = f.couplings_path;
    if (f.g) cfg.g = *f.g;
    if (f.active) cfg.active = *f.active;
    if (f.trials) cfg.trials = *f.trials;
    if (f.grid_steps) cfg.grid_steps = *f.grid_steps;
    if (f.epsilon) cfg.epsilon = *f.epsilon;
    if (!f.perturbation.empty()) cfg.perturbation = f.perturbation;
    if (f.t_prime || f.k) {
        const double tp = f.t_prime.value_or(cfg.plan.T_prime);
        const int k = f.k.value_or(cfg.plan.k);
        cfg.plan = TimingPlan::from_k(tp, k);
    } else if (f.t) {
        cfg.plan = TimingPlan{*f.t, *f.t, 1};
    }
    if (f.t) cfg.modq_plan.T = *f.t;
    return cfg;
}

int emit_report(const RunReport& report, const Flags& f) {
    const nlohmann::json j = to_json(report);
    if (!f.report_path.empty()) {
        std::ofstream out(f.report_path);
        if (!out) throw std::invalid_argument("cannot write report: " + f.report_path);
        out << j.dump(2) << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    std::cerr << (report.pass ? "PASS" : "FAIL")
              << " worst_fidelity=" << report.worst_fidelity
              << " max_eigen_residual=" << report.max_eigen_residual
              << " wall_time_s=" << report.wall_time_s << "\n";
    return report.pass ? kExitPass : kExitFail;
}

int run_mode(Mode mode, const Flags& f) { return emit_report(run(assemble_config(mode, f)), f); }

int run_validate(const Flags& f) {
    if (f.couplings_path.empty())
        throw std::invalid_argument("validate requires --couplings <file>");
    const CouplingMatrix c = coupling_matrix_from_json(load_json(f.couplings_path));
    const StructureReport structure = validate_pair_structure(c);
    nlohmann::json out{{"pairs", c.pairs()}, {"pair_structure", structure.passed}};
    if (!structure.passed) {
        out["violation"] = {{"pair_u", structure.violation->pair_u},
                            {"pair_v", structure.violation->pair_v},
                            {"values", structure.violation->values}};
    }
    bool ok = structure.passed;
    if (structure.passed) {
        out["reduced"] = to_json(*structure.reduced);
        if (f.q) {  // Mod_q constraint check
            ModqPlan plan = ModqPlan::basic(*f.q, f.t.value_or(1.0), f.k.value_or(1));
            const ConstraintReport r =
                check_modq_couplings(*structure.reduced, plan, f.g.value_or(0.0));
            out["modq"] = to_json(r);
            ok = ok && r.passed;
        } else {
            const double tp = f.t_prime.value_or(f.t.value_or(1.0));
            const TimingPlan plan = TimingPlan::from_k(tp, f.k.value_or(1));
            const ConstraintReport parity = check_parity_couplings(*structure.reduced, plan);
            out["parity"] = to_json(parity);
            ok = ok && parity.passed;
            if (f.g) {
                const ConstraintReport unc =
                    check_uncompute_constraints(*structure.reduced, plan, *f.g);
                out["uncompute"] = to_json(unc);
                ok = ok && unc.passed;
            }
        }
    }
    if (!f.report_path.empty()) {
        std::ofstream file(f.report_path);
        file << out.dump(2) << "\n";
    } else {
        std::cout << out.dump(2) << "\n";
    }
    return ok ? kExitPass : kExitFail;
}

int run_sweep(const Flags& f) {
    if (f.variable.empty()) throw std::invalid_argument("sweep requires --variable");
    if (f.step <= 0.0) throw std::invalid_argument("sweep requires --step > 0");
    std::vector<double> values;
    for (double v = f.from; v <= f.to + 1e-12; v += f.step) values.push_back(v);
    ExperimentConfig cfg = assemble_config(mode_from_string(f.baseline), f);
    if (!f.csv_path.empty()) {
        std::ofstream out(f.csv_path);
        if (!out) throw std::invalid_argument("cannot write csv: " + f.csv_path);
        emit_sweep_csv(cfg, f.variable, values, out);
    } else {
        emit_sweep_csv(cfg, f.variable, values, std::cout);
    }
    return kExitPass;
}

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "experiment config JSON");
    cmd->add_option("--report", f.report_path, "write the run report JSON here");
    cmd->add_option("--seed", f.seed, "RNG seed");
    cmd->add_option("--couplings", f.couplings_path, "coupling matrix JSON file");
    cmd->add_option("--g", f.g, "external field strength");
    cmd->add_option("--T", f.t, "forward evolution time");
    cmd->add_option("--T-prime", f.t_prime, "uncompute evolution time");
    cmd->add_option("--k", f.k, "timing multiplier (odd for parity; coprime residue for modq)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "spinfan: exact simulation of parity, fanout, GHZ and Mod_q gates driven by "
        "spin-exchange evolution over pair-encoded qubits"};
    app.require_subcommand(1);
    Flags f;

    CLI::App* validate = app.add_subcommand("validate", "validate a coupling matrix file");
    add_common(validate, f);
    validate->add_option("--q", f.q, "check the Mod_q constraint family instead of parity");

    CLI::App* parity = app.add_subcommand("parity", "parity circuit vs oracle");
    CLI::App* fanout = app.add_subcommand("fanout", "fanout circuit vs oracle");
    CLI::App* ghz = app.add_subcommand("ghz", "GHZ preparation fidelity");
    for (CLI::App* cmd : {parity, fanout, ghz}) {
        add_common(cmd, f);
        cmd->add_option("--p", f.p, "logical input bits (2..5)");
        cmd->add_option("--active", f.active, "active pair index (default p)");
    }

    CLI::App* modq = app.add_subcommand("modq", "Mod_q circuit vs oracle");
    add_common(modq, f);
    modq->add_option("--p", f.p, "control bits");
    modq->add_option("--q", f.q, "modulus (>= 2)");
    modq->add_flag("--standard", f.standard, "standard gate (default: generalized)");

    CLI::App* eigencheck = app.add_subcommand("eigencheck", "closed-form eigenvalue residuals");
    add_common(eigencheck, f);
    eigencheck->add_option("--p", f.p, "logical bits");
    eigencheck->add_option("--trials", f.trials, "number of sampled configurations");

    CLI::App* appa = app.add_subcommand("appendix-a", "encoder amplitude residual scan");
    add_common(appa, f);
    appa->add_option("--p", f.p, "logical bits");
    appa->add_option("--grid-steps", f.grid_steps, "grid resolution");

    CLI::App* appb = app.add_subcommand("appendix-b", "eigenvalue difference identity + witnesses");
    add_common(appb, f);
    appb->add_option("--p", f.p, "logical bits (>= 3)");
    appb->add_option("--trials", f.trials, "number of sampled configurations");

    CLI::App* perturb = app.add_subcommand("perturb", "negative control: constraint violations");
    add_common(perturb, f);
    perturb->add_option("--p", f.p, "logical bits");
    perturb->add_option("--epsilon", f.epsilon, "perturbation size");
    perturb->add_option("--perturbation", f.perturbation,
                        "external | k-even | g-offset (default external)");

    CLI::App* sweep = app.add_subcommand("sweep", "fidelity vs perturbation CSV");
    add_common(sweep, f);
    sweep->add_option("--p", f.p, "logical bits");
    sweep->add_option("--variable", f.variable, "epsilon | T-offset | g-offset")->required();
    sweep->add_option("--from", f.from, "range start")->required();
    sweep->add_option("--to", f.to, "range end")->required();
    sweep->add_option("--step", f.step, "range step")->required();
    sweep->add_option("--csv", f.csv_path, "output CSV path (default stdout)");
    sweep->add_option("--baseline", f.baseline, "parity | fanout (default parity)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (validate->parsed()) return run_validate(f);
        if (parity->parsed()) return run_mode(Mode::parity, f);
        if (fanout->parsed()) return run_mode(Mode::fanout, f);
        if (ghz->parsed()) return run_mode(Mode::ghz, f);
        if (modq->parsed())
            return run_mode(f.standard ? Mode::modq_standard : Mode::modq_generalized, f);
        if (eigencheck->parsed()) return run_mode(Mode::eigencheck, f);
        if (appa->parsed()) return run_mode(Mode::appendix_a, f);
        if (appb->parsed()) return run_mode(Mode::appendix_b, f);
        if (perturb->parsed()) return run_mode(Mode::negative_perturbation, f);
        if (sweep->parsed()) return run_sweep(f);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
