#include <catch2/catch_amalgamated.hpp>

#include <multiportlab/core.hpp>

#include "oracles.hpp"

using namespace mplab;

namespace {

// the three-port coin (-i/3)[[1,-2,-2],[-2,1,-2],[-2,-2,1]], written out
ComplexMatrix coin3() {
    const Complex diag(0.0, -1.0 / 3.0);
    const Complex off(0.0, 2.0 / 3.0);
    ComplexMatrix m = ComplexMatrix::Constant(3, 3, off);
    m.diagonal().setConstant(diag);
    return m;
}

// (pi/6)[[1,-2,-2],[-2,1,-2],[-2,-2,1]]
ComplexMatrix coin3_log() {
    ComplexMatrix m = ComplexMatrix::Constant(3, 3, Complex(-2.0, 0.0));
    m.diagonal().setConstant(Complex(1.0, 0.0));
    return (kPi / 6.0) * m;
}

} // namespace

TEST_CASE("unitarity and hermiticity checks") {
    REQUIRE(check_unitary(coin3(), 1e-12));
    REQUIRE(check_unitary(ComplexMatrix::Identity(4, 4), 0.0));
    ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
    bad(0, 0) = 2.0;
    bad(1, 1) = 1.0;
    REQUIRE_FALSE(check_unitary(bad, 1e-6));
    REQUIRE_THROWS_AS(check_unitary(ComplexMatrix::Zero(2, 3)), std::invalid_argument);

    REQUIRE(check_hermitian(coin3_log(), 1e-14));
    REQUIRE_FALSE(check_hermitian(coin3(), 1e-6));
}

TEST_CASE("validated wrapper types") {
    REQUIRE_NOTHROW(UnitaryMatrix(coin3(), 1e-12));
    ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
    bad(0, 0) = 2.0;
    bad(1, 1) = 1.0;
    REQUIRE_THROWS_AS(UnitaryMatrix(bad), std::invalid_argument);

    REQUIRE_NOTHROW(HamiltonianOperator(coin3_log()));
    REQUIRE_THROWS_AS(HamiltonianOperator(coin3()), std::invalid_argument);
    REQUIRE_THROWS_AS(HamiltonianOperator(coin3_log(), kDefaultTolerance, 0.0), std::invalid_argument);

    ComplexVector amps(2);
    amps << Complex(1.0, 0.0), Complex(0.0, 0.0);
    const StateVector psi({"a", "b"}, amps);
    REQUIRE(psi.dim() == 2);
    REQUIRE(psi.norm() == Catch::Approx(1.0));
    REQUIRE_THROWS_AS(StateVector({"a"}, amps), std::invalid_argument);
}

TEST_CASE("principal log of the three-port coin") {
    const HamiltonianOperator h = principal_log_hamiltonian(UnitaryMatrix(coin3(), 1e-12));
    REQUIRE(oracle::max_abs_diff(h.inner, coin3_log()) < 1e-12);
    REQUIRE(hermiticity_residual(h.inner) < 1e-12);

    // e^{-iH} reproduces the coin (independent series exponential)
    const ComplexMatrix reproduced = oracle::expm_series(Complex(0.0, -1.0) * h.inner);
    REQUIRE(oracle::max_abs_diff(reproduced, coin3()) < 1e-10);
}

TEST_CASE("principal log closed forms") {
    const HamiltonianOperator hid = principal_log_hamiltonian(UnitaryMatrix(ComplexMatrix::Identity(3, 3)));
    REQUIRE(hid.inner.cwiseAbs().maxCoeff() < 1e-14);

    ComplexMatrix d(2, 2);
    d << Complex(0.0, 1.0), Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(0.0, -1.0);
    const HamiltonianOperator hd = principal_log_hamiltonian(UnitaryMatrix(d));
    ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
    expected(0, 0) = -kPi / 2.0;
    expected(1, 1) = kPi / 2.0;
    REQUIRE(oracle::max_abs_diff(hd.inner, expected) < 1e-14);
}

TEST_CASE("branch boundary policy") {
    const UnitaryMatrix minus_i2(-ComplexMatrix::Identity(2, 2));
    REQUIRE_THROWS_AS(principal_log_hamiltonian(minus_i2), std::domain_error);

    const HamiltonianOperator snapped =
        principal_log_hamiltonian(minus_i2, BranchBoundary::snap);
    REQUIRE(oracle::max_abs_diff(snapped.inner, kPi * ComplexMatrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("log round trip on random unitaries") {
    oracle::Rng rng(0x1001);
    for (int dim : {2, 3, 5, 8, 16}) {
        const ComplexMatrix u = oracle::random_unitary_off_branch(rng, dim);
        const HamiltonianOperator h = principal_log_hamiltonian(UnitaryMatrix(u));
        REQUIRE(hermiticity_residual(h.inner) < 1e-12);
        const UnitaryMatrix back = exp_evolution(h, 1.0);
        REQUIRE(oracle::max_abs_diff(back.inner, u) < 1e-10);

        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.inner);
        REQUIRE(es.eigenvalues().minCoeff() > -kPi);
        REQUIRE(es.eigenvalues().maxCoeff() <= kPi + 1e-12);
    }
}

TEST_CASE("discrete evolution") {
    const UnitaryMatrix u(coin3(), 1e-12);

    ComplexVector sym = ComplexVector::Constant(3, Complex(1.0 / std::sqrt(3.0), 0.0));
    const StateVector psi_sym{{"A", "B", "C"}, sym};
    const StateVector zero_steps = evolve(u, psi_sym, 0);
    REQUIRE(oracle::max_abs_diff(zero_steps.amplitudes, sym) == 0.0);
    REQUIRE(zero_steps.basis == psi_sym.basis);

    const StateVector one = evolve(u, psi_sym, 1);
    REQUIRE(oracle::max_abs_diff(one.amplitudes, ComplexVector(Complex(0.0, 1.0) * sym)) < 1e-14);

    ComplexVector e0 = ComplexVector::Zero(3);
    e0(0) = 1.0;
    const StateVector two = evolve(u, StateVector(e0), 2);
    REQUIRE(oracle::max_abs_diff(two.amplitudes, ComplexVector(oracle::matpow(coin3(), 2) * e0)) < 1e-14);
    REQUIRE(oracle::max_abs_diff(two.amplitudes, ComplexVector(-e0)) < 1e-14);
    REQUIRE(two.norm() == Catch::Approx(1.0).margin(1e-12));

    oracle::Rng rng(0x1002);
    const UnitaryMatrix r(oracle::random_unitary(rng, 5));
    ComplexVector amps(5);
    for (int i = 0; i < 5; ++i) amps(i) = rng.complex_gaussian();
    amps.normalize();
    const StateVector psi(amps);
    const StateVector both = evolve(r, psi, 7);
    const StateVector split = evolve(r, evolve(r, psi, 3), 4);
    REQUIRE(oracle::max_abs_diff(both.amplitudes, split.amplitudes) < 1e-12);

    REQUIRE_THROWS_AS(evolve(u, psi, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(evolve(u, psi_sym, -1), std::invalid_argument);
}

TEST_CASE("exponential evolution") {
    const HamiltonianOperator h6(coin3_log());
    REQUIRE(oracle::max_abs_diff(exp_evolution(h6, 0.0).inner, ComplexMatrix::Identity(3, 3)) < 1e-14);
    REQUIRE(oracle::max_abs_diff(exp_evolution(h6, 1.0).inner, coin3()) < 1e-10);
    REQUIRE(oracle::max_abs_diff(exp_evolution(h6, 1.0).inner,
                                 oracle::expm_series(Complex(0.0, -1.0) * coin3_log())) < 1e-10);

    // involution family: V(T) = I cos T - i H sin T
    ComplexMatrix x(2, 2);
    x << Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 0.0);
    const HamiltonianOperator hx(x);
    for (double t : {0.0, 0.3, 1.1, kPi / 2.0, 2.9}) {
        const ComplexMatrix expected = std::cos(t) * ComplexMatrix::Identity(2, 2) +
                                       Complex(0.0, -std::sin(t)) * x;
        REQUIRE(oracle::max_abs_diff(exp_evolution(hx, t).inner, expected) < 1e-12);
    }
    REQUIRE(oracle::max_abs_diff(exp_evolution(hx, kPi / 2.0).inner,
                                 ComplexMatrix(Complex(0.0, -1.0) * x)) < 1e-12);

    // default duration is the operator's own time step
    const HamiltonianOperator h_half(coin3_log(), kDefaultTolerance, 0.5);
    REQUIRE(oracle::max_abs_diff(exp_evolution(h_half).inner, exp_evolution(h_half, 0.5).inner) == 0.0);
}

TEST_CASE("global phase comparison") {
    oracle::Rng rng(0x1003);
    const ComplexMatrix u = oracle::random_unitary(rng, 4);
    const ComplexMatrix shifted = std::polar(1.0, 1.2345) * u;

    REQUIRE(global_phase_distance(u, shifted) < 1e-12);
    REQUIRE(oracle::phase_aligned_distance(u, shifted) < 1e-12);
    REQUIRE(oracle::max_abs_diff(align_global_phase(u, shifted), u) < 1e-12);

    const ComplexMatrix other = oracle::random_unitary(rng, 4);
    REQUIRE(global_phase_distance(u, other) > 0.1);
    REQUIRE(oracle::phase_aligned_distance(u, other) > 0.1);
}
