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

#include <unsupported/Eigen/MatrixFunctions>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace spinfan;
using spinfan::testing::random_state;
using spinfan::testing::reference_p3;

TEST_CASE("apply_gate basics") {
    const Vector plus = apply_gate(basis_state(1, 0), Gate::h(1));
    REQUIRE(plus(0).real() == Catch::Approx(1 / std::sqrt(2.0)));
    REQUIRE(plus(1).real() == Catch::Approx(1 / std::sqrt(2.0)));

    REQUIRE((apply_gate(basis_state(2, 2), Gate::cnot(1, 2)) - basis_state(2, 3)).norm() <
            1e-14);

    const Vector enc = apply_gate(basis_state(2, 2), Gate::encode(1, 2));
    Vector singlet = Vector::Zero(4);
    singlet(1) = 1 / std::sqrt(2.0);
    singlet(2) = -1 / std::sqrt(2.0);
    REQUIRE((enc - singlet).norm() < 1e-14);
}

TEST_CASE("apply_gate rejects bad targets") {
    REQUIRE_THROWS_AS(apply_gate(basis_state(2, 0), Gate::h(3)), std::out_of_range);
    REQUIRE_THROWS_AS(apply_gate(basis_state(2, 0), Gate::cnot(1, 1)), std::invalid_argument);
}

TEST_CASE("named gates compose to identity with their inverses") {
    const Vector psi = random_state(3, 99);
    const auto roundtrip = [&](const Gate& g, const Gate& ginv) {
        const Vector out = apply_gate(apply_gate(psi, g), ginv);
        REQUIRE((out - psi).norm() < 1e-10);
    };
    roundtrip(Gate::h(2), Gate::h(2));
    roundtrip(Gate::x(1), Gate::x(1));
    roundtrip(Gate::z(3), Gate::z(3));
    roundtrip(Gate::cnot(1, 3), Gate::cnot(1, 3));
    roundtrip(Gate::encode(2, 3), Gate::decode(2, 3));
    const Matrix v = v_gate(spinfan::testing::random_pair_couplings(2, 5), 0.9, 1.3, 2);
    roundtrip(Gate::v(v, 1), Gate::v_dagger(v.adjoint(), 1));
    Vector phi0(2), phi1(2);
    phi0 << Complex(0.6, 0.0), Complex(0.0, 0.8);
    phi1 << Complex(-0.8, 0.0), Complex(0.0, 0.6);
    const Matrix r = build_r_unitary({phi0, phi1});
    roundtrip(Gate::r(r, {2}), Gate::r_dagger(r.adjoint(), {2}));
}

TEST_CASE("embed_on_subset") {
    REQUIRE(max_abs_diff(embed_on_subset(Matrix::Identity(2, 2), {2}, 3),
                         Matrix::Identity(8, 8)) == 0.0);

    const Matrix x = gate_matrix(Gate::x(1));
    const Matrix embedded = embed_on_subset(x, {2}, 2);
    REQUIRE((Vector(embedded * basis_state(2, 0)) - basis_state(2, 1)).norm() < 1e-14);

    Matrix swap = Matrix::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
    const Matrix swap13 = embed_on_subset(swap, {1, 3}, 3);
    REQUIRE((Vector(swap13 * basis_state(3, 0b100)) - basis_state(3, 0b001)).norm() < 1e-14);

    SECTION("consistent with apply_gate") {
        const Vector psi = random_state(4, 7);
        const Matrix u = encoder_unitary();
        const Vector via_gate = apply_gate(psi, Gate::unitary(u, {3, 1}));
        const Vector via_embed = embed_on_subset(u, {3, 1}, 4) * psi;
        REQUIRE((via_gate - via_embed).norm() < 1e-12);
    }
    SECTION("range and overlap errors") {
        REQUIRE_THROWS_AS(embed_on_subset(Matrix::Identity(4, 4), {1, 1}, 3),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(embed_on_subset(Matrix::Identity(4, 4), {0, 2}, 3),
                          std::out_of_range);
    }
}

TEST_CASE("evolve_exact") {
    SECTION("t = 0 is the identity") {
        const auto cfg = reference_p3();
        const Matrix h = build_hamiltonian(cfg.couplings, cfg.g);
        const Vector psi = random_state(6, 11);
        REQUIRE((evolve_exact(psi, h, 0.0) - psi).norm() < 1e-12);
    }
    SECTION("diagonal Hamiltonian applies a phase") {
        Matrix h = Matrix::Zero(2, 2);
        h(1, 1) = 0.77;
        const Vector out = evolve_exact(basis_state(1, 1), h, 1.3);
        REQUIRE(std::abs(out(1) - std::exp(Complex(0, -1.3 * 0.77))) < 1e-12);
    }
    SECTION("non-Hermitian input is rejected") {
        Matrix h = Matrix::Zero(2, 2);
        h(0, 1) = 1.0;
        REQUIRE_THROWS_AS(ExactEvolver(h), std::invalid_argument);
    }
    SECTION("semigroup property") {
        const Matrix h = build_hamiltonian(spinfan::testing::random_couplings(2, 8), 0.4);
        const ExactEvolver ev(h);
        const Vector psi = random_state(4, 12);
        const Vector once = ev.evolve(psi, 0.9);
        const Vector split = ev.evolve(ev.evolve(psi, 0.5), 0.4);
        REQUIRE((once - split).norm() < 1e-9);
        REQUIRE(std::abs(once.norm() - 1.0) < 1e-10);
    }
    SECTION("matches the dense matrix exponential") {
        // independent oracle: Pade-based matrix exponential of -iHt
        const Matrix h = build_hamiltonian(spinfan::testing::random_couplings(2, 15), 0.8);
        const double t = 0.37;
        const Matrix u = (Complex(0, -t) * h).exp();
        const Vector psi = random_state(4, 16);
        REQUIRE((evolve_exact(psi, h, t) - u * psi).norm() < 1e-10);
    }
    SECTION("weight-sector blocking agrees with a scrambled (unblocked) copy") {
        const Matrix h = build_hamiltonian(
            spinfan::testing::random_pair_couplings(2, 23).to_matrix(), 1.1);
        Matrix scrambled = h;
        scrambled(0, 1) = scrambled(1, 0) = 1e-30;  // breaks the exact-zero block detection
        const Vector psi = random_state(4, 29);
        REQUIRE((evolve_exact(psi, h, 2.1) - evolve_exact(psi, scrambled, 2.1)).norm() < 1e-9);
    }
}

TEST_CASE("encoded eigenstates evolve by the analytic phase") {
    const auto cfg = reference_p3();
    const PairCouplings reduced = require_pair_structure(cfg.couplings);
    const Matrix h = build_hamiltonian(cfg.couplings, cfg.g);
    const ExactEvolver ev(h);
    for (const char* xs : {"101", "010", "111"}) {
        const BitString x(xs);
        const Vector xl = encode_bitstring(x);
        const Vector out = ev.evolve(xl, cfg.plan.T);
        const Complex analytic = evolve_analytic(x, reduced, cfg.g, cfg.plan.T);
        REQUIRE(std::abs(xl.dot(out) - analytic) < 1e-9);
        const double delta = eigen_data(reduced, cfg.g, x).delta_x;
        REQUIRE(std::abs(xl.dot(out) * std::exp(Complex(0, cfg.plan.T * delta)) - 1.0) < 1e-9);
    }
}

TEST_CASE("evolve_exact matches evolve_analytic on sampled constraint configs") {
    for (std::uint64_t seed : {61u, 62u, 63u}) {
        const TimingPlan plan{1.0, 1.0, 1};
        const CouplingMatrix couplings = sample_couplings(3, plan, seed);
        const double g = sample_field(plan, seed);
        const PairCouplings reduced = require_pair_structure(couplings);
        const ExactEvolver ev(build_hamiltonian(couplings, g));
        for (std::int64_t xi = 0; xi < 8; ++xi) {
            const BitString x = BitString::from_index(xi, 3);
            const Vector xl = encode_bitstring(x);
            const Complex overlap = xl.dot(ev.evolve(xl, plan.T));
            REQUIRE(std::abs(overlap - evolve_analytic(x, reduced, g, plan.T)) < 1e-9);
        }
    }
}

TEST_CASE("evolve_analytic trivial cases") {
    const PairCouplings zero(2, RealMatrix::Zero(2, 2), {0.0, 0.0});
    REQUIRE(evolve_analytic(BitString("10"), zero, 0.0, 1.7) == Complex(1.0, 0.0));
    const PairCouplings c = spinfan::testing::random_pair_couplings(2, 4);
    REQUIRE(std::abs(evolve_analytic(BitString("01"), c, 0.9, 0.0) - Complex(1.0, 0.0)) <
            1e-15);
}

TEST_CASE("equal_up_to_global_phase") {
    const Matrix id = Matrix::Identity(4, 4);
    const Complex phase = std::exp(Complex(0, pi / 3));
    auto [ok, fitted] = equal_up_to_global_phase(Matrix(phase * id), id, 1e-12);
    REQUIRE(ok);
    REQUIRE(std::abs(fitted - phase) < 1e-12);

    const Matrix x = gate_matrix(Gate::x(1));
    REQUIRE_FALSE(equal_up_to_global_phase(Matrix::Identity(2, 2), x, 1e-9).first);
}

TEST_CASE("circuit unitary") {
    SECTION("empty circuit is the identity") {
        Circuit c;
        c.qubits = 2;
        REQUIRE(max_abs_diff(circuit_unitary(c), Matrix::Identity(4, 4)) == 0.0);
    }
    SECTION("H twice is the identity") {
        Circuit c;
        c.qubits = 1;
        c.append(Gate::h(1));
        c.append(Gate::h(1));
        REQUIRE(max_abs_diff(circuit_unitary(c), Matrix::Identity(2, 2)) < 1e-14);
    }
    SECTION("the encoder circuit sequence reproduces encoder_unitary") {
        // CNOT(1->2), then H on qubit 1 controlled by qubit 2, then CNOT(1->2)
        Matrix ch = Matrix::Zero(4, 4);
        const double s = 1 / std::sqrt(2.0);
        ch(0, 0) = ch(2, 2) = 1.0;
        ch(1, 1) = ch(3, 1) = ch(1, 3) = s;
        ch(3, 3) = -s;
        Circuit c;
        c.qubits = 2;
        c.append(Gate::cnot(1, 2));
        c.append(Gate::unitary(ch, {1, 2}));
        c.append(Gate::cnot(1, 2));
        REQUIRE(max_abs_diff(circuit_unitary(c), encoder_unitary()) < 1e-12);
    }
    SECTION("unitarity of a mixed circuit") {
        const auto cfg = spinfan::testing::reference_p2();
        ParityCircuitSpec spec(2, cfg.couplings, cfg.g, cfg.plan);
        const Matrix u = circuit_unitary(build_parity_circuit(spec));
        REQUIRE(is_unitary(u, 1e-9));
    }
}

TEST_CASE("circuit JSON emission") {
    const auto cfg = spinfan::testing::reference_p2();
    ParityCircuitSpec spec(2, cfg.couplings, cfg.g, cfg.plan);
    const Circuit c = build_parity_circuit(spec);
    const nlohmann::json j = to_json(c);
    REQUIRE(j.at("qubits").get<int>() == 5);
    REQUIRE(j.at("gates").size() == c.gates.size());
    REQUIRE(j.at("gates")[0].at("gate") == "H");
    bool saw_evolve = false;
    for (const auto& g : j.at("gates"))
        if (g.at("gate") == "evolve") {
            saw_evolve = true;
            REQUIRE(g.at("hamiltonian") == "H_g");
            REQUIRE(g.at("t").get<double>() > 0.0);
        }
    REQUIRE(saw_evolve);
}
