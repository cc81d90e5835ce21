#pragma once

// Discrete-time Hamiltonian constructions around the three-port coin: the
// three-site generator and its dispersion relation, time-reversal doubling of
// a unitary into a Hermitian block operator, beam-splitter forms, and discrete
// momentum eigenstates on an N-site ring.

#include "core.hpp"
#include "multiport.hpp"

#include <optional>

namespace mplab {

// Hermitian + unitary block operator [[0, U+], [U, 0]] of dimension 2d; holds
// forward and reversed transitions simultaneously and squares to the identity.
struct ReversedHamiltonian {
    HamiltonianOperator inner;
    Eigen::Index block_dim = 0; // d: dimension of the underlying unitary
};

// Quasi-momentum eigenstate on an N-site ring; k lives on the grid 2 pi n / N.
struct MomentumState {
    double k = 0.0;
    int sites = 0;
    StateVector vector;
};

// Three-site generator assembled from the per-site operator sum
//   (pi/6) sum_m [ |m><m| - 2 ( |m+1><m| + |m><m+1| ) ],  indices mod 3.
// Equals +i ln of the three-port coin and i (pi/2) times the coin itself:
// (pi/6) [[1, -2, -2], [-2, 1, -2], [-2, -2, 1]].
inline HamiltonianOperator three_point_hamiltonian() {
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    for (int m = 0; m < 3; ++m) {
        h(m, m) += Complex(1.0, 0.0);
        h((m + 1) % 3, m) += Complex(-2.0, 0.0);
        h(m, (m + 1) % 3) += Complex(-2.0, 0.0);
    }
    h *= kPi / 6.0;
    return HamiltonianOperator(std::move(h));
}

// quasi-energy of the three-site ring at quasi-momentum k
inline double three_point_dispersion(double k) {
    return (kPi / 6.0) * (1.0 - 4.0 * std::cos(k));
}

// Embed a d-dim unitary into the 2d-dim Hermitian block form [[0, U+],[U, 0]].
// The result is simultaneously Hermitian and unitary, so H^2 = I and
// exp(-i H T) = I cos T - i H sin T.
inline ReversedHamiltonian reversible_double(const UnitaryMatrix& u) {
    const Eigen::Index d = u.dim();
    ComplexMatrix h = ComplexMatrix::Zero(2 * d, 2 * d);
    h.topRightCorner(d, d) = u.inner.adjoint();
    h.bottomLeftCorner(d, d) = u.inner;
    return ReversedHamiltonian{HamiltonianOperator(std::move(h)), d};
}

// the standard symmetric 50/50 beam splitter, (1/sqrt2) [[1, i], [i, 1]]
inline UnitaryMatrix beamsplitter_2() {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix m(2, 2);
    m << Complex(s, 0), Complex(0, s),
         Complex(0, s), Complex(s, 0);
    return UnitaryMatrix(std::move(m));
}

// four-port (all-directions) beam splitter: the time-reversal doubling of the
// two-port form; Hermitian and unitary at once
inline UnitaryMatrix beamsplitter_4() {
    return UnitaryMatrix(reversible_double(beamsplitter_2()).inner.inner);
}

// Quasi-momentum eigenstate (amplitudes e^{i m k} / sqrt N, m = 0..N-1).
// k must sit on the discrete grid 2 pi n / N within grid_tolerance; off-grid
// momenta are not eigenstates of any N-periodic operator and are rejected.
inline MomentumState momentum_state(double k, int sites, double grid_tolerance = 1e-9) {
    if (sites < 1) throw std::invalid_argument("momentum_state requires at least one site");
    double kw = std::fmod(k, kTwoPi);
    if (kw < 0.0) kw += kTwoPi;
    const double cell = kw * sites / kTwoPi;
    long nearest = std::lround(cell);
    const double snapped = kTwoPi * nearest / sites;
    if (std::abs(kw - snapped) > grid_tolerance)
        throw std::domain_error("quasi-momentum is off the 2 pi n / N grid");
    nearest %= sites;
    const double q = kTwoPi * nearest / sites;

    ComplexVector amps(sites);
    const double scale = 1.0 / std::sqrt(static_cast<double>(sites));
    for (int m = 0; m < sites; ++m)
        amps(m) = std::polar(scale, m * q);
    return MomentumState{q, sites, StateVector(std::move(amps))};
}

} // namespace mplab
