#include <catch2/catch_amalgamated.hpp>

#include <multiportlab/experiment.hpp>
#include <multiportlab/hamiltonian.hpp>

#include "oracles.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

using namespace mplab;

namespace {

StateVector random_three_state(oracle::Rng& rng) {
    ComplexVector amps(3);
    for (int i = 0; i < 3; ++i) amps(i) = rng.complex_gaussian();
    amps /= amps.norm();
    return StateVector(std::move(amps));
}

// independent copy of the documented stream-derivation mix, for cross-checking
std::uint64_t ref_splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

TEST_CASE("position preparation builds labeled basis vectors") {
    const StateVector e0 = prepare_position(0, 3);
    REQUIRE(e0.dim() == 3);
    CHECK(e0.amplitudes(0) == Complex(1.0, 0.0));
    CHECK(e0.amplitudes(1) == Complex(0.0, 0.0));
    CHECK(e0.amplitudes(2) == Complex(0.0, 0.0));
    CHECK(e0.norm() == 1.0);
    REQUIRE(e0.basis.size() == 3);
    CHECK(e0.basis[0] == "0");
    CHECK(e0.basis[2] == "2");

    const StateVector e2 = prepare_position(2, 5);
    CHECK(e2.dim() == 5);
    CHECK(e2.amplitudes(2) == Complex(1.0, 0.0));
    CHECK(e2.amplitudes.cwiseAbs().sum() == 1.0);

    CHECK_THROWS_AS(prepare_position(-1, 3), std::out_of_range);
    CHECK_THROWS_AS(prepare_position(3, 3), std::out_of_range);
    CHECK_THROWS_AS(prepare_position(0, 0), std::invalid_argument);

    SECTION("one-step return amplitude is the coin diagonal, -i/3") {
        const StateVector out = evolve(grover_unitary(3), e0, 1);
        CHECK(std::abs(out.amplitudes(0) - Complex(0.0, -1.0 / 3.0)) < 1e-15);
    }
}

TEST_CASE("W state carries exactly equal amplitudes") {
    for (int n : {3, 5, 8}) {
        const WState w = w_state(n);
        REQUIRE(w.n == n);
        REQUIRE(w.amplitudes.size() == n);
        const Complex expected(1.0 / std::sqrt(static_cast<double>(n)), 0.0);
        for (int i = 0; i < n; ++i) CHECK(w.amplitudes(i) == expected); // bitwise
    }

    SECTION("norm stays 1 for large n") {
        for (int n : {2, 17, 256, 1024}) {
            const WState w = w_state(n);
            CHECK(std::abs(w.amplitudes.norm() - 1.0) < 1e-12);
        }
    }

    SECTION("state conversion keeps amplitudes and adds index labels") {
        const StateVector s = to_state(w_state(4));
        REQUIRE(s.dim() == 4);
        CHECK(s.basis[3] == "3");
        CHECK(s.amplitudes(1) == Complex(0.5, 0.0));
    }

    CHECK_THROWS_AS(w_state(1), std::invalid_argument);
    CHECK_THROWS_AS(w_state(0), std::invalid_argument);
}

TEST_CASE("walk distribution reproduces the coin exit probabilities") {
    const UnitaryMatrix u = grover_unitary(3);
    const StateVector e0 = prepare_position(0, 3);

    SECTION("a single step gives the 1/9, 4/9, 4/9 split") {
        const ExitDistribution d = walk_distribution(u, e0, 1);
        CHECK(d.input_port == 0);
        REQUIRE(d.probabilities.size() == 3);
        CHECK(std::abs(d.probabilities[0] - 1.0 / 9.0) < 1e-14);
        CHECK(std::abs(d.probabilities[1] - 4.0 / 9.0) < 1e-14);
        CHECK(std::abs(d.probabilities[2] - 4.0 / 9.0) < 1e-14);
    }

    SECTION("zero steps is the identity") {
        const ExitDistribution d = walk_distribution(u, e0, 0);
        CHECK(d.probabilities[0] == 1.0);
        CHECK(d.probabilities[1] == 0.0);
        CHECK(d.probabilities[2] == 0.0);
    }

    SECTION("two steps return: the coin squares to -identity") {
        const ComplexMatrix u2 = oracle::matpow(u.inner, 2);
        CHECK(oracle::max_abs_diff(u2, -ComplexMatrix::Identity(3, 3)) < 1e-15);
        const ExitDistribution d = walk_distribution(u, e0, 2);
        CHECK(std::abs(d.probabilities[0] - 1.0) < 1e-14);
        CHECK(std::abs(d.probabilities[1]) < 1e-14);
        CHECK(std::abs(d.probabilities[2]) < 1e-14);
    }

    SECTION("probabilities are periodic in the step count with period 2") {
        oracle::Rng rng(0xE1u);
        const StateVector psi0 = random_three_state(rng);
        for (int s = 0; s <= 4; ++s) {
            const ExitDistribution a = walk_distribution(u, psi0, s);
            const ExitDistribution b = walk_distribution(u, psi0, s + 2);
            for (int i = 0; i < 3; ++i)
                CHECK(std::abs(a.probabilities[static_cast<size_t>(i)] -
                               b.probabilities[static_cast<size_t>(i)]) < 1e-12);
        }
    }

    SECTION("composite inputs report no originating port") {
        const ExitDistribution d = walk_distribution(u, to_state(w_state(3)), 1);
        CHECK(d.input_port == -1);
        double total = 0.0;
        for (double p : d.probabilities) total += p;
        CHECK(std::abs(total - 1.0) < 1e-12);
    }

    CHECK_THROWS_AS(walk_distribution(u, prepare_position(0, 4), 1), std::invalid_argument);
}

TEST_CASE("shot sampling is deterministic and statistically sound") {
    ExitDistribution dist;
    dist.input_port = 0;
    dist.probabilities = {1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0};

    SECTION("zero shots gives all-zero counts") {
        const ShotRecord rec = sample_shots(dist, 0, 7u);
        CHECK(rec.shots == 0);
        CHECK(rec.counts == std::vector<long long>{0, 0, 0});
    }

    SECTION("a deterministic distribution collapses to one port") {
        ExitDistribution delta;
        delta.probabilities = {1.0, 0.0, 0.0};
        const ShotRecord rec = sample_shots(delta, 1234, 99u);
        CHECK(rec.counts == std::vector<long long>{1234, 0, 0});
    }

    SECTION("counts land within five binomial sigma at 90000 shots") {
        const long long shots = 90000;
        const ShotRecord rec = sample_shots(dist, shots, 0xC0FFEEull);
        long long total = 0;
        for (long long c : rec.counts) total += c;
        CHECK(total == shots);
        for (size_t i = 0; i < 3; ++i) {
            const double p = dist.probabilities[i];
            const double mean = p * static_cast<double>(shots);
            const double sigma = std::sqrt(static_cast<double>(shots) * p * (1.0 - p));
            CHECK(std::abs(static_cast<double>(rec.counts[i]) - mean) < 5.0 * sigma);
        }
    }

    SECTION("identical seed reproduces identical counts, bit for bit") {
        const ShotRecord a = sample_shots(dist, 50000, 0x5EEDull);
        const ShotRecord b = sample_shots(dist, 50000, 0x5EEDull);
        CHECK(a.counts == b.counts);
        const ShotRecord c = sample_shots(dist, 50000, 0x5EEEull);
        CHECK(a.counts != c.counts);
    }

    SECTION("counts match an independent replay of the documented algorithm") {
        // splitmix64-seeded mt19937_64, uniforms from the top 53 bits, inverse
        // CDF in port order; any deviation inside sample_shots breaks this
        const long long shots = 4096;
        const std::uint64_t seed = 0xABCDEF01ull;
        std::uint64_t state = seed;
        std::mt19937_64 eng(ref_splitmix64(state));
        double total = 0.0;
        std::vector<double> cum(3);
        for (size_t i = 0; i < 3; ++i) {
            total += dist.probabilities[i];
            cum[i] = total;
        }
        std::vector<long long> expected(3, 0);
        for (long long s = 0; s < shots; ++s) {
            const double x = static_cast<double>(eng() >> 11) * 0x1.0p-53 * total;
            size_t port = 2;
            for (size_t i = 0; i < 3; ++i) {
                if (x < cum[i]) {
                    port = i;
                    break;
                }
            }
            ++expected[port];
        }
        const ShotRecord rec = sample_shots(dist, shots, seed);
        CHECK(rec.counts == expected);
    }

    SECTION("empirical frequencies converge on at least 99 of 100 seeds") {
        const long long shots = 20000;
        int ok = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const ShotRecord rec = sample_shots(dist, shots, seed);
            bool within = true;
            for (size_t i = 0; i < 3; ++i) {
                const double p = dist.probabilities[i];
                const double freq = static_cast<double>(rec.counts[i]) / static_cast<double>(shots);
                const double bound = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
                if (std::abs(freq - p) > bound) within = false;
            }
            if (within) ++ok;
        }
        CHECK(ok >= 99);
    }

    SECTION("invalid inputs are rejected") {
        CHECK_THROWS_AS(sample_shots(dist, -1, 0u), std::invalid_argument);
        ExitDistribution empty;
        CHECK_THROWS_AS(sample_shots(empty, 10, 0u), std::invalid_argument);
        ExitDistribution negative;
        negative.probabilities = {1.2, -0.2};
        CHECK_THROWS_AS(sample_shots(negative, 10, 0u), std::invalid_argument);
        ExitDistribution leaky;
        leaky.probabilities = {0.5, 0.4};
        CHECK_THROWS_AS(sample_shots(leaky, 10, 0u), std::invalid_argument);
    }
}

TEST_CASE("amplitude readout exposes the full complex state") {
    const UnitaryMatrix u = grover_unitary(3);

    SECTION("the uniform momentum state picks up a bare factor of i per step") {
        const MomentumState m = momentum_state(0.0, 3);
        const StateVector out = transition_amplitudes(u, m.vector, 1);
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(out.amplitudes(i) - Complex(0.0, 1.0) * m.vector.amplitudes(i)) < 1e-12);
    }

    SECTION("zero steps returns the input unchanged") {
        oracle::Rng rng(0xA2u);
        const StateVector psi0 = random_three_state(rng);
        const StateVector out = transition_amplitudes(u, psi0, 0);
        CHECK(oracle::max_abs_diff(out.amplitudes, psi0.amplitudes) == 0.0);
    }

    SECTION("four steps close the cycle") {
        CHECK(oracle::max_abs_diff(oracle::matpow(u.inner, 4), ComplexMatrix::Identity(3, 3)) <
              1e-15);
        oracle::Rng rng(0xA3u);
        const StateVector psi0 = random_three_state(rng);
        const StateVector out = transition_amplitudes(u, psi0, 4);
        CHECK(oracle::max_abs_diff(out.amplitudes, psi0.amplitudes) < 1e-12);
    }

    SECTION("one step from a port reads out the coin column") {
        const StateVector out = transition_amplitudes(u, prepare_position(0, 3), 1);
        CHECK(std::abs(out.amplitudes(0) - Complex(0.0, -1.0 / 3.0)) < 1e-15);
        CHECK(std::abs(out.amplitudes(1) - Complex(0.0, 2.0 / 3.0)) < 1e-15);
        CHECK(std::abs(out.amplitudes(2) - Complex(0.0, 2.0 / 3.0)) < 1e-15);
    }
}

TEST_CASE("compact two-coin walk matches the explicit chain evolution") {
    const UnitaryMatrix u = grover_unitary(3);
    oracle::Rng rng(0xF01Du);

    SECTION("one step is one coin application") {
        const StateVector psi0 = random_three_state(rng);
        const StateVector got = compact_evolve(psi0, 1);
        CHECK(oracle::max_abs_diff(got.amplitudes, (u.inner * psi0.amplitudes).eval()) < 1e-15);
    }

    SECTION("agrees with evolve for every step count up to 16") {
        for (int trial = 0; trial < 5; ++trial) {
            const StateVector psi0 = random_three_state(rng);
            for (int steps = 0; steps <= 16; ++steps) {
                const StateVector a = compact_evolve(psi0, steps);
                const StateVector b = evolve(u, psi0, steps);
                CHECK(oracle::max_abs_diff(a.amplitudes, b.amplitudes) < 1e-12);
            }
        }
    }

    SECTION("norm survives a million steps") {
        const StateVector psi0 = random_three_state(rng);
        const StateVector out = compact_evolve(psi0, 1000000);
        CHECK(std::abs(out.norm() - 1.0) < 1e-9);
    }

    SECTION("rejects wrong dimension and negative steps") {
        CHECK_THROWS_AS(compact_evolve(prepare_position(0, 4), 1), std::invalid_argument);
        CHECK_THROWS_AS(compact_evolve(prepare_position(0, 3), -1), std::invalid_argument);
    }
}

TEST_CASE("stream seeds derive deterministically and stay distinct") {
    const std::uint64_t seed = 0xDEADBEEFCAFEull;
    CHECK(derive_stream_seed(seed, 0) == seed);

    std::uint64_t state = seed;
    for (int s = 1; s <= 4; ++s) {
        const std::uint64_t expected = ref_splitmix64(state);
        CHECK(derive_stream_seed(seed, s) == expected);
    }

    std::vector<std::uint64_t> seen;
    for (int s = 0; s <= 20; ++s) seen.push_back(derive_stream_seed(42u, s));
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());

    CHECK_THROWS_AS(derive_stream_seed(seed, -1), std::invalid_argument);
}

TEST_CASE("shot records and distributions export cleanly") {
    SECTION("CSV is port,count with one row per port") {
        ShotRecord rec;
        rec.shots = 10;
        rec.seed = 1;
        rec.counts = {3, 0, 7};
        CHECK(shots_to_csv(rec) == "port,count\n0,3\n1,0\n2,7\n");
    }

    SECTION("JSON round-trips through a parser") {
        ExitDistribution dist;
        dist.input_port = 2;
        dist.probabilities = {0.25, 0.5, 0.25};
        const std::string text = distribution_to_json(dist);
        CHECK(text == distribution_to_json(dist)); // deterministic
        const nlohmann::json j = nlohmann::json::parse(text);
        CHECK(j.at("input_port").get<int>() == 2);
        REQUIRE(j.at("probabilities").size() == 3);
        CHECK(j.at("probabilities")[1].get<double>() == 0.5);
    }
}
