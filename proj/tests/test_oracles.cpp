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

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace spinfan;
using spinfan::testing::random_pair_couplings;
using spinfan::testing::reference_p2;
using spinfan::testing::reference_p3;

TEST_CASE("parity oracle") {
    const TruthTable t = parity_oracle(2);
    REQUIRE(t.apply(0b100) == 0b101);  // (10, 0) -> (10, 1)
    REQUIRE(t.apply(0b000) == 0b000);
    const TruthTable t3 = parity_oracle(3);
    REQUIRE(t3.apply(0b1111) == 0b1110);  // (111, 1) -> (111, 0)
    REQUIRE(t.is_bijection());
    REQUIRE(t.is_involution());
}

TEST_CASE("fanout oracle") {
    const TruthTable t = fanout_oracle(2);
    REQUIRE(t.apply(0b101) == 0b011);  // (10, 1) -> (01, 1)
    for (std::int64_t x = 0; x < 4; ++x) REQUIRE(t.apply(x << 1) == x << 1);  // c = 0 fixes
    REQUIRE(t.is_involution());
}

TEST_CASE("fanout is the Hadamard conjugate of parity") {
    for (int p = 1; p <= 4; ++p) {
        const Matrix f = fanout_oracle(p).unitary();
        Matrix h1(2, 2);
        const double s = 1 / std::sqrt(2.0);
        h1 << s, s, s, -s;
        Matrix bank = h1;
        for (int i = 1; i <= p; ++i) bank = kron(bank, h1);
        const Matrix conj = bank * parity_oracle(p).unitary() * bank;
        REQUIRE(max_abs_diff(f, conj) < 1e-12);
    }
}

TEST_CASE("modq oracle") {
    const TruthTable gen = modq_oracle(2, 3, true);
    REQUIRE(gen.apply(0b1100) == 0b1111);  // x = 11, w mod 3 = 2 flips t1 t2
    const TruthTable std3 = modq_oracle(3, 3, false);
    REQUIRE(std3.apply(0b1110) == 0b1110);  // weight 3 is a multiple of 3
    REQUIRE(std3.apply(0b1100) == 0b1101);  // weight 2 flips

    SECTION("q = 2 generalized equals the parity table") {
        const TruthTable a = modq_oracle(3, 2, true);
        const TruthTable b = parity_oracle(3);
        REQUIRE(a.map == b.map);
    }
    SECTION("involutions") {
        for (bool generalized : {false, true}) {
            const TruthTable t = modq_oracle(3, 4, generalized);
            REQUIRE(t.is_bijection());
            REQUIRE(t.is_involution());
        }
    }
}

TEST_CASE("eigen_residual") {
    const Matrix id = Matrix::Identity(4, 4);
    REQUIRE(eigen_residual(id, basis_state(2, 1), 1.0) == 0.0);

    const auto cfg = reference_p3();
    const Matrix j2 = build_j_squared_pauli(cfg.couplings);
    const PairCouplings reduced = require_pair_structure(cfg.couplings);
    const BitString x("110");
    const double lambda = lambda_closed_form(reduced, x);
    REQUIRE(eigen_residual(j2, encode_bitstring(x), lambda) < 1e-10);

    // the triplet encoding breaks the eigen relation
    const double s = 1 / std::sqrt(2.0);
    const Vector triplet = encode_bitstring(x, GeneralEncoderParams{Complex(s, 0), Complex(s, 0)});
    REQUIRE(eigen_residual(j2, triplet, lambda) > 0.1);
}

TEST_CASE("appendix A residual scan") {
    const auto cfg = reference_p2();
    const AppendixAScan scan = appendix_a_necessity_scan(2, cfg.couplings, alpha_beta_grid(32));
    REQUIRE(scan.singlet_ok);
    REQUIRE(scan.off_singlet_ok);

    const double s = 1 / std::sqrt(2.0);
    SECTION("singlet point is an eigenstate") {
        const AppendixAScan one = appendix_a_necessity_scan(
            2, cfg.couplings, {GeneralEncoderParams{Complex(s, 0), Complex(-s, 0)}});
        REQUIRE(one.points[0].max_residual < 1e-8);
    }
    SECTION("triplet point fails badly") {
        const AppendixAScan one = appendix_a_necessity_scan(
            2, cfg.couplings, {GeneralEncoderParams{Complex(s, 0), Complex(s, 0)}});
        REQUIRE(one.points[0].min_residual > 0.1);
    }
    SECTION("beta = 0 fails for generic couplings") {
        const AppendixAScan one = appendix_a_necessity_scan(
            2, cfg.couplings, {GeneralEncoderParams{Complex(1, 0), Complex(0, 0)}});
        REQUIRE(one.points[0].min_residual > 1e-3);
    }
}

TEST_CASE("appendix B difference identity holds on random instances") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const PairCouplings c = random_pair_couplings(4, 1000 + seed);
        const AppendixBReport report = appendix_b_witness(c);
        REQUIRE(report.identity_cases > 0);
        REQUIRE(report.max_identity_residual < 1e-10);
    }
}

TEST_CASE("appendix B witness search") {
    SECTION("uniform couplings have weight-only eigenvalues") {
        RealMatrix ext = RealMatrix::Constant(4, 4, 0.7);
        ext.diagonal().setZero();
        const PairCouplings c(4, ext, {1.3, 1.3, 1.3, 1.3});
        const AppendixBReport report = appendix_b_witness(c);
        REQUIRE_FALSE(report.witness_found);
    }
    SECTION("the reference configuration yields a witness pair") {
        const PairCouplings c = require_pair_structure(reference_p3().couplings);
        const AppendixBReport report = appendix_b_witness(c);
        REQUIRE(report.witness_found);
        REQUIRE(std::abs(report.lambda_diff) >= pi - 1e-9);
        const double lx = lambda_closed_form(c, BitString(report.witness_x));
        const double ly = lambda_closed_form(c, BitString(report.witness_y));
        REQUIRE(lx - ly == Catch::Approx(report.lambda_diff));
    }
    SECTION("unequal internals alone also break weight-only dependence") {
        RealMatrix ext = RealMatrix::Constant(3, 3, 0.5);
        ext.diagonal().setZero();
        const PairCouplings c(3, ext, {0.3, 0.9, 0.3});
        REQUIRE(appendix_b_witness(c).witness_found);
    }
}

TEST_CASE("appendix reports serialize") {
    const PairCouplings c = require_pair_structure(reference_p3().couplings);
    const nlohmann::json j = to_json(appendix_b_witness(c));
    REQUIRE(j.contains("max_residual"));
    REQUIRE(j.at("witness").contains("lambda_diff"));
}
