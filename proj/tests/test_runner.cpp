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

#include <cstdio>
#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace spinfan;

TEST_CASE("parity run passes end to end") {
    ExperimentConfig config;
    config.mode = Mode::parity;
    config.p = 3;
    config.seed = 7;
    const RunReport report = run(config);
    REQUIRE(report.pass);
    REQUIRE(report.worst_fidelity >= 1.0 - 1e-9);
    REQUIRE(report.phase_spread < 1e-9);
    REQUIRE(report.worst_ancilla_leak < 1e-9);
    REQUIRE(report.max_eigen_residual < 1e-10);
    REQUIRE(report.per_input.size() == 16);
}

TEST_CASE("fanout and ghz runs pass") {
    ExperimentConfig config;
    config.mode = Mode::fanout;
    config.p = 2;
    config.seed = 3;
    REQUIRE(run(config).pass);

    config.mode = Mode::ghz;
    REQUIRE(run(config).pass);
}

TEST_CASE("negative perturbation is detected") {
    ExperimentConfig config;
    config.mode = Mode::negative_perturbation;
    config.p = 3;
    config.seed = 11;
    config.epsilon = 0.1;
    for (const char* what : {"external", "k-even", "g-offset"}) {
        config.perturbation = what;
        const RunReport report = run(config);
        REQUIRE(report.pass);  // pass means the perturbation was detected
        REQUIRE(report.worst_fidelity < 0.999);
    }
}

TEST_CASE("eigencheck run") {
    ExperimentConfig config;
    config.mode = Mode::eigencheck;
    config.p = 4;
    config.seed = 1;
    config.trials = 5;
    const RunReport report = run(config);
    REQUIRE(report.pass);
    REQUIRE(report.max_eigen_residual < 1e-10);
}

TEST_CASE("modq runs pass") {
    ExperimentConfig config;
    config.mode = Mode::modq_generalized;
    config.p = 2;
    config.q = 3;
    config.seed = 2;
    const RunReport gen = run(config);
    REQUIRE(gen.pass);
    REQUIRE(gen.extra.at("phi_gram_deviation").get<double>() < 1e-9);

    config.mode = Mode::modq_standard;
    config.q = 2;
    REQUIRE(run(config).pass);
}

TEST_CASE("appendix modes pass") {
    ExperimentConfig config;
    config.mode = Mode::appendix_a;
    config.p = 2;
    config.seed = 5;
    config.grid_steps = 16;
    REQUIRE(run(config).pass);

    config.mode = Mode::appendix_b;
    config.p = 4;
    config.trials = 10;
    REQUIRE(run(config).pass);
}

TEST_CASE("couplings can be loaded from a file") {
    const auto cfg = spinfan::testing::reference_p3();
    const std::string path = "reference_couplings_test.json";
    {
        std::ofstream out(path);
        out << to_json(require_pair_structure(cfg.couplings)).dump();
    }
    ExperimentConfig config;
    config.mode = Mode::parity;
    config.p = 3;
    config.couplings_path = path;
    config.g = cfg.g;
    const RunReport report = run(config);
    std::remove(path.c_str());
    REQUIRE(report.pass);
}

TEST_CASE("reports are deterministic apart from wall time") {
    ExperimentConfig config;
    config.mode = Mode::parity;
    config.p = 2;
    config.seed = 42;
    nlohmann::json a = to_json(run(config));
    nlohmann::json b = to_json(run(config));
    a.erase("wall_time_s");
    b.erase("wall_time_s");
    REQUIRE(a.dump() == b.dump());
}

TEST_CASE("config JSON round trip") {
    ExperimentConfig config;
    config.mode = Mode::modq_standard;
    config.p = 2;
    config.q = 3;
    config.seed = 17;
    config.g = 1.5;
    config.active = 2;
    const ExperimentConfig back = config_from_json(to_json(config));
    REQUIRE(back.mode == Mode::modq_standard);
    REQUIRE(back.p == 2);
    REQUIRE(back.q == 3);
    REQUIRE(back.seed == 17);
    REQUIRE(back.g.value() == 1.5);
    REQUIRE(back.active.value() == 2);
}

TEST_CASE("sweep csv") {
    ExperimentConfig config;
    config.mode = Mode::parity;
    config.p = 2;
    config.seed = 9;
    SECTION("epsilon sweep starts at fidelity 1") {
        std::ostringstream out;
        emit_sweep_csv(config, "epsilon", {0.0, 0.05, 0.1}, out);
        std::istringstream lines(out.str());
        std::string header, first;
        std::getline(lines, header);
        REQUIRE(header == "value,worst_fidelity");
        std::getline(lines, first);
        const double fid0 = std::stod(first.substr(first.find(',') + 1));
        REQUIRE(fid0 >= 1.0 - 1e-9);
        std::string second, third;
        std::getline(lines, second);
        std::getline(lines, third);
        const double fid2 = std::stod(third.substr(third.find(',') + 1));
        REQUIRE(fid2 < fid0);
    }
    SECTION("T-offset zero reproduces the baseline") {
        std::ostringstream out;
        emit_sweep_csv(config, "T-offset", {0.0}, out);
        const std::string text = out.str();
        const double fid = std::stod(text.substr(text.rfind(',') + 1));
        REQUIRE(fid >= 1.0 - 1e-9);
    }
    SECTION("empty range and unknown variable are rejected") {
        std::ostringstream out;
        REQUIRE_THROWS_AS(emit_sweep_csv(config, "epsilon", {}, out), std::invalid_argument);
        REQUIRE_THROWS_AS(emit_sweep_csv(config, "detuning", {0.1}, out),
                          std::invalid_argument);
    }
}

TEST_CASE("runner guards desk scale") {
    ExperimentConfig config;
    config.mode = Mode::parity;
    config.p = 6;
    REQUIRE_THROWS_AS(run(config), std::invalid_argument);
    config.mode = Mode::modq_generalized;
    config.p = 4;
    config.q = 4;  // z = 7
    REQUIRE_THROWS_AS(run(config), std::invalid_argument);
}
