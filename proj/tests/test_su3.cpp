#include <catch2/catch_amalgamated.hpp>

#include <multiportlab/chain.hpp>
#include <multiportlab/su3.hpp>

#include <json.hpp>

#include "oracles.hpp"

#include <cmath>
#include <utility>
#include <vector>

using namespace mplab;

TEST_CASE("generator matrices match their defining entries") {
    const Complex i(0.0, 1.0);

    ComplexMatrix l1(3, 3);
    l1 << 0, 1, 0, 1, 0, 0, 0, 0, 0;
    CHECK(oracle::max_abs_diff(gell_mann(1), l1) == 0.0);

    const double r3 = 1.0 / std::sqrt(3.0);
    ComplexMatrix l8 = ComplexMatrix::Zero(3, 3);
    l8(0, 0) = r3;
    l8(1, 1) = r3;
    l8(2, 2) = -2.0 * r3;
    CHECK(oracle::max_abs_diff(gell_mann(8), l8) == 0.0);

    ComplexMatrix l7 = ComplexMatrix::Zero(3, 3);
    l7(1, 2) = -i;
    l7(2, 1) = i;
    CHECK(oracle::max_abs_diff(gell_mann(7), l7) == 0.0);

    SECTION("every generator is traceless and Hermitian") {
        for (int j = 1; j <= 8; ++j) {
            const ComplexMatrix l = gell_mann(j);
            CHECK(std::abs(l.trace()) < 1e-15);
            CHECK(hermiticity_residual(l) == 0.0);
        }
    }

    SECTION("index range is enforced") {
        CHECK_THROWS_AS(gell_mann(0), std::invalid_argument);
        CHECK_THROWS_AS(gell_mann(9), std::invalid_argument);
        CHECK_THROWS_AS(gell_mann(-3), std::invalid_argument);
    }
}

TEST_CASE("generators are orthogonal under the trace inner product") {
    for (int a = 1; a <= 8; ++a) {
        for (int b = 1; b <= 8; ++b) {
            const Complex t = (gell_mann(a) * gell_mann(b)).trace();
            const double expected = (a == b) ? 2.0 : 0.0;
            CHECK(std::abs(t - expected) < 1e-14);
        }
    }
}

TEST_CASE("su3 decomposition on closed-form inputs") {
    SECTION("identity has only an isotropic part") {
        const auto c = su3_decompose(ComplexMatrix::Identity(3, 3));
        CHECK(c.d0 == Catch::Approx(1.0).margin(1e-15));
        for (double dj : c.d)
            CHECK(std::abs(dj) < 1e-15);
    }

    SECTION("a bare generator decomposes onto itself") {
        for (int j = 1; j <= 8; ++j) {
            const auto c = su3_decompose(gell_mann(j));
            CHECK(std::abs(c.d0) < 1e-15);
            for (int b = 1; b <= 8; ++b) {
                const double expected = (b == j) ? 1.0 : 0.0;
                CHECK(std::abs(c.d[static_cast<size_t>(b - 1)] - expected) < 1e-14);
            }
        }
    }

    SECTION("non-Hermitian input is rejected") {
        ComplexMatrix m = ComplexMatrix::Zero(3, 3);
        m(0, 1) = 1.0;
        CHECK_THROWS_AS(su3_decompose(m), std::invalid_argument);
        CHECK_THROWS_AS(su3_decompose(ComplexMatrix::Identity(2, 2)), std::invalid_argument);
    }
}

TEST_CASE("momentum-space walk generator stays in the d4 = d5 = 0 plane") {
    const int samples = 64;
    for (int s = 0; s < samples; ++s) {
        const double k = kTwoPi * s / samples;
        const ComplexMatrix hk = bloch_hamiltonian(k);
        const auto c = su3_decompose(hk);
        CHECK(std::abs(c.d[3]) < 1e-12); // d4
        CHECK(std::abs(c.d[4]) < 1e-12); // d5
        const ComplexMatrix back = su3_reconstruct(c);
        CHECK(oracle::max_abs_diff(back, hk) < 1e-12);
    }
}

TEST_CASE("decompose and reconstruct are mutually inverse on random Hermitian matrices") {
    oracle::Rng rng(1923u);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexMatrix h = oracle::random_hermitian(rng, 3);
        const auto c = su3_decompose(h);
        const ComplexMatrix back = su3_reconstruct(c);
        CHECK(oracle::max_abs_diff(back, h) < 1e-12);
    }
}

TEST_CASE("decomposition is linear") {
    oracle::Rng rng(77u);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix h1 = oracle::random_hermitian(rng, 3);
        const ComplexMatrix h2 = oracle::random_hermitian(rng, 3);
        const double a = rng.uniform(-2.0, 2.0);
        const double b = rng.uniform(-2.0, 2.0);
        const auto mix = su3_decompose(a * h1 + b * h2);
        const auto c1 = su3_decompose(h1);
        const auto c2 = su3_decompose(h2);
        CHECK(mix.d0 == Catch::Approx(a * c1.d0 + b * c2.d0).margin(1e-12));
        for (size_t j = 0; j < 8; ++j)
            CHECK(mix.d[j] == Catch::Approx(a * c1.d[j] + b * c2.d[j]).margin(1e-12));
    }
}

TEST_CASE("pauli decomposition for 2x2 Hermitian operators") {
    SECTION("closed forms") {
        const auto cx = su2_decompose(pauli(1));
        CHECK(cx.d0 == Catch::Approx(0.0).margin(1e-15));
        CHECK(cx.dx == Catch::Approx(1.0).margin(1e-15));
        CHECK(cx.dy == Catch::Approx(0.0).margin(1e-15));
        CHECK(cx.dz == Catch::Approx(0.0).margin(1e-15));

        const auto ci = su2_decompose(ComplexMatrix::Identity(2, 2));
        CHECK(ci.d0 == Catch::Approx(1.0).margin(1e-15));
        CHECK(std::abs(ci.dx) + std::abs(ci.dy) + std::abs(ci.dz) < 1e-15);
    }

    SECTION("round trip") {
        oracle::Rng rng(4242u);
        for (int trial = 0; trial < 50; ++trial) {
            const ComplexMatrix h = oracle::random_hermitian(rng, 2);
            const ComplexMatrix back = su2_reconstruct(su2_decompose(h));
            CHECK(oracle::max_abs_diff(back, h) < 1e-14);
        }
    }

    SECTION("validation") {
        CHECK_THROWS_AS(pauli(0), std::invalid_argument);
        CHECK_THROWS_AS(pauli(4), std::invalid_argument);
        ComplexMatrix m(2, 2);
        m << 0, 1, 0, 0;
        CHECK_THROWS_AS(su2_decompose(m), std::invalid_argument);
    }
}

TEST_CASE("coefficient table JSON export") {
    std::vector<std::pair<double, GellMannCoefficients>> rows;
    for (int s = 0; s < 4; ++s) {
        const double k = kTwoPi * s / 4;
        rows.emplace_back(k, su3_decompose(bloch_hamiltonian(k)));
    }
    const std::string text = coefficients_to_json(rows);

    const nlohmann::json parsed = nlohmann::json::parse(text);
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 4);
    for (size_t s = 0; s < 4; ++s) {
        const auto& rec = parsed[s];
        REQUIRE(rec.is_object());
        REQUIRE(rec.size() == 10);
        CHECK(rec.at("k").get<double>() == Catch::Approx(rows[s].first).margin(1e-15));
        CHECK(rec.at("d0").get<double>() == Catch::Approx(rows[s].second.d0).margin(1e-15));
        for (int j = 1; j <= 8; ++j) {
            const std::string name = "d" + std::to_string(j);
            CHECK(rec.at(name).get<double>() ==
                  Catch::Approx(rows[s].second.d[static_cast<size_t>(j - 1)]).margin(1e-15));
        }
    }

    SECTION("export text is stable across calls") {
        CHECK(coefficients_to_json(rows) == text);
    }
}
