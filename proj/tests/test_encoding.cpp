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
using spinfan::testing::reference_p3;

namespace {
const double s2 = 1.0 / std::sqrt(2.0);
}

TEST_CASE("encoder maps |00> to |00> and |10> to the singlet") {
    const Matrix e = encoder_unitary();
    Vector in00 = basis_state(2, 0);
    Vector out00 = e * in00;
    REQUIRE((out00 - in00).norm() < 1e-14);

    Vector out10 = e * basis_state(2, 2);
    Vector singlet = Vector::Zero(4);
    singlet(1) = s2;
    singlet(2) = -s2;
    REQUIRE((out10 - singlet).norm() < 1e-14);

    REQUIRE(max_abs(Matrix(e.adjoint() * e - Matrix::Identity(4, 4))) < 1e-14);
}

TEST_CASE("general encoder") {
    SECTION("singlet parameters reproduce the encoder on |00> and |10>") {
        const Matrix e = encoder_unitary();
        const Matrix ge = general_encoder({Complex(s2, 0), Complex(-s2, 0)});
        REQUIRE((Vector(e.col(0)) - Vector(ge.col(0))).norm() < 1e-14);
        REQUIRE((Vector(e.col(2)) - Vector(ge.col(2))).norm() < 1e-14);
    }
    SECTION("alpha = 1 sends |10> to |01>") {
        const Matrix ge = general_encoder({Complex(1, 0), Complex(0, 0)});
        REQUIRE((Vector(ge.col(2)) - basis_state(2, 1)).norm() < 1e-14);
    }
}

TEST_CASE("general encoder rejects non-normalized parameters") {
    REQUIRE_THROWS_AS(general_encoder({Complex(1.0, 0.0), Complex(0.5, 0.0)}),
                      std::invalid_argument);
    for (double t : {0.3, 1.1, 2.9}) {
        const Matrix ge =
            general_encoder({Complex(std::cos(t), 0.0), Complex(std::sin(t), 0.0)});
        REQUIRE(is_unitary(ge, 1e-12));
    }
}

TEST_CASE("encode_bitstring") {
    REQUIRE((encode_bitstring(BitString("00")) - basis_state(4, 0)).norm() < 1e-14);

    Vector expected = Vector::Zero(16);
    expected(0b0100) = s2;
    expected(0b1000) = -s2;
    REQUIRE((encode_bitstring(BitString("10")) - expected).norm() < 1e-14);

    // x = 11 is the two-singlet product
    Vector singlet = Vector::Zero(4);
    singlet(1) = s2;
    singlet(2) = -s2;
    REQUIRE((encode_bitstring(BitString("11")) - kron(singlet, singlet)).norm() < 1e-14);
    REQUIRE(encode_bitstring(BitString("101")).norm() == Catch::Approx(1.0));
}

TEST_CASE("lambda closed form on fixed couplings") {
    RealMatrix ext = RealMatrix::Zero(2, 2);
    ext(0, 1) = ext(1, 0) = pi / 2;
    const PairCouplings c(2, ext, {pi, pi});
    // eta = -2 Jext - (Jint1 + Jint2)/2 = -2pi; the x-dependent part
    // contributes pi and 4pi respectively (values pinned by the dense oracle
    // below).
    REQUIRE(lambda_closed_form(c, BitString("10")) == Catch::Approx(-pi));
    REQUIRE(lambda_closed_form(c, BitString("00")) == Catch::Approx(2 * pi));

    // dense cross-check
    const Matrix j2 = build_j_squared_pauli(c.to_matrix());
    for (const char* xs : {"10", "00"}) {
        const BitString x(xs);
        const Vector xl = encode_bitstring(x);
        REQUIRE((j2 * xl - lambda_closed_form(c, x) * xl).norm() < 1e-10);
    }
}

TEST_CASE("lambda closed form vanishes for zero couplings") {
    const PairCouplings c(3, RealMatrix::Zero(3, 3), {0.0, 0.0, 0.0});
    for (std::int64_t xi = 0; xi < 8; ++xi)
        REQUIRE(lambda_closed_form(c, BitString::from_index(xi, 3)) == 0.0);
}

TEST_CASE("lambda closed form rejects non-pair-structured couplings") {
    const CouplingMatrix c = spinfan::testing::random_couplings(2, 3);
    REQUIRE_THROWS_AS(lambda_closed_form(c, BitString("10")), std::invalid_argument);
}

TEST_CASE("eigen data") {
    SECTION("g = 0 gives delta = -lambda") {
        const PairCouplings c = random_pair_couplings(3, 21);
        for (std::int64_t xi = 0; xi < 8; ++xi) {
            const BitString x = BitString::from_index(xi, 3);
            const EigenData d = eigen_data(c, 0.0, x);
            REQUIRE(d.delta_x == Catch::Approx(-d.lambda_x));
        }
    }
    SECTION("last-bit flip: delta_v - delta_u = c(v) + c(g,p)") {
        const auto cfg = reference_p3();
        const PairCouplings c = require_pair_structure(cfg.couplings);
        const EigenData du = eigen_data(c, cfg.g, BitString("110"));
        const EigenData dv = eigen_data(c, cfg.g, BitString("111"));
        REQUIRE(std::abs((dv.delta_x - du.delta_x) - (du.c_v + du.c_gp)) < 1e-10);
        REQUIRE(du.c_v == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(du.c_gp == Catch::Approx(pi));
    }
    SECTION("c_x sums internal couplings with weight signs") {
        RealMatrix ext = RealMatrix::Zero(3, 3);
        ext(0, 1) = ext(1, 0) = ext(0, 2) = ext(2, 0) = ext(1, 2) = ext(2, 1) = 1.0;
        const PairCouplings c(3, ext, {pi, 2 * pi, pi});
        REQUIRE(eigen_data(c, 0.0, BitString("101")).c_x == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("last-bit flip identity for lambda on random couplings") {
    for (std::uint64_t seed : {31u, 32u, 33u}) {
        const int p = 4;
        const PairCouplings c = random_pair_couplings(p, seed);
        for (std::int64_t xi = 0; xi < (1 << p); ++xi) {
            const BitString v0 = BitString::from_index(xi, p).with_bit(p, 1);
            const BitString u0 = v0.with_bit(p, 0);
            double expected = 2.0 * c.jint(p);
            for (int t : v0.zeros()) expected += 2.0 * c.jext(p, t);
            REQUIRE(lambda_closed_form(c, u0) - lambda_closed_form(c, v0) ==
                    Catch::Approx(expected));
        }
    }
}

TEST_CASE("encoded states keep total Z at p - weight") {
    const int p = 3;
    const Matrix jz = build_total_spin_z(PairLayout(p));
    for (std::int64_t xi = 0; xi < 8; ++xi) {
        const BitString x = BitString::from_index(xi, p);
        const Vector xl = encode_bitstring(x);
        const double expected = p - x.weight();
        REQUIRE((jz * xl - expected * xl).norm() < 1e-12);
    }
}

TEST_CASE("bit string helpers") {
    const BitString x("101");
    REQUIRE(x.weight() == 2);
    REQUIRE(x.ones() == std::vector<int>{1, 3});
    REQUIRE(x.zeros() == std::vector<int>{2});
    REQUIRE(x.index() == 5);
    REQUIRE(BitString::from_index(5, 3) == x);
    REQUIRE(x.concat(BitString("1")).str() == "1011");
    REQUIRE_THROWS_AS(BitString("1021"), std::invalid_argument);
}
