#pragma once

// Dense complex linear-algebra core: validated unitary / Hermitian wrappers,
// the principal-branch discrete-time generator H = +i ln U, eigendecomposition
// based evolution, and global-phase comparison utilities.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mplab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// max-abs residual of U+ U - I; throws on non-square or empty input
inline double unitarity_residual(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw std::invalid_argument("unitarity check requires a non-empty square matrix");
    ComplexMatrix g = m.adjoint() * m;
    g -= ComplexMatrix::Identity(m.rows(), m.cols());
    return g.cwiseAbs().maxCoeff();
}

inline bool check_unitary(const ComplexMatrix& m, double tolerance = kDefaultTolerance) {
    return unitarity_residual(m) <= tolerance;
}

inline double hermiticity_residual(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw std::invalid_argument("hermiticity check requires a non-empty square matrix");
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool check_hermitian(const ComplexMatrix& m, double tolerance = kDefaultTolerance) {
    return hermiticity_residual(m) <= tolerance;
}

// Unitary matrix validated at construction.
struct UnitaryMatrix {
    ComplexMatrix inner;
    double tolerance = kDefaultTolerance;

    UnitaryMatrix() = default;

    explicit UnitaryMatrix(ComplexMatrix m, double tol = kDefaultTolerance)
        : inner(std::move(m)), tolerance(tol) {
        const double r = unitarity_residual(inner);
        if (r > tolerance)
            throw std::invalid_argument("matrix is not unitary: residual " + std::to_string(r) +
                                        " exceeds tolerance " + std::to_string(tolerance));
    }

    Eigen::Index dim() const { return inner.rows(); }
};

// Hermitian generator of a discrete-time evolution U = exp(-i H T).
struct HamiltonianOperator {
    ComplexMatrix inner;
    double time_step = 1.0;

    HamiltonianOperator() = default;

    explicit HamiltonianOperator(ComplexMatrix m, double tol = kDefaultTolerance, double step = 1.0)
        : inner(std::move(m)), time_step(step) {
        const double r = hermiticity_residual(inner);
        if (r > tol)
            throw std::invalid_argument("matrix is not Hermitian: residual " + std::to_string(r) +
                                        " exceeds tolerance " + std::to_string(tol));
        if (!(time_step > 0.0))
            throw std::invalid_argument("time step must be positive");
    }

    Eigen::Index dim() const { return inner.rows(); }
};

// Single-photon amplitude vector with optional basis labels. Empty labels mean
// the implicit basis 0..d-1.
struct StateVector {
    std::vector<std::string> basis;
    ComplexVector amplitudes;

    StateVector() = default;

    explicit StateVector(ComplexVector amps) : amplitudes(std::move(amps)) {}

    StateVector(std::vector<std::string> labels, ComplexVector amps)
        : basis(std::move(labels)), amplitudes(std::move(amps)) {
        if (!basis.empty() && static_cast<Eigen::Index>(basis.size()) != amplitudes.size())
            throw std::invalid_argument("basis label count does not match amplitude count");
    }

    Eigen::Index dim() const { return amplitudes.size(); }
    double norm() const { return amplitudes.norm(); }
};

// What to do with evolution-operator eigenvalues sitting on the principal
// branch cut (energy within the guard of -pi): reject by default, or snap to
// the canonical +pi (so U = -I maps to H = pi I under `snap`).
enum class BranchBoundary { error, snap };

// H = +i ln U on the principal branch: eigenvalue lambda = e^{-iE} maps to
// E = -arg(lambda) taken in (-pi, pi]. Computed through a Schur factorization
// (U is normal, so the Schur form is diagonal and the Schur basis orthonormal),
// never through a power series. The result is symmetrized to make Hermiticity
// exact at machine precision.
inline HamiltonianOperator principal_log_hamiltonian(const UnitaryMatrix& u,
                                                     BranchBoundary boundary = BranchBoundary::error,
                                                     double branch_guard = 1e-12) {
    Eigen::ComplexSchur<ComplexMatrix> schur(u.inner);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("Schur factorization failed");
    const ComplexMatrix& t = schur.matrixT();
    const ComplexMatrix& q = schur.matrixU();
    const Eigen::Index d = u.dim();

    RealVector energies(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const Complex lambda = t(j, j);
        double e = -std::arg(lambda); // in [-pi, pi]
        if (kPi - std::abs(e) <= branch_guard) {
            // eigenvalue on (or numerically straddling) the cut at lambda = -1,
            // approached from either side
            if (boundary == BranchBoundary::error)
                throw std::domain_error(
                    "evolution eigenvalue lies on the principal branch cut (within " +
                    std::to_string(branch_guard) + " of -1); pass BranchBoundary::snap to map it to +pi");
            e = kPi;
        }
        energies(j) = e;
    }

    ComplexMatrix h = q * energies.cast<Complex>().asDiagonal() * q.adjoint();
    h = Complex(0.5, 0.0) * (h + h.adjoint().eval());
    return HamiltonianOperator(std::move(h));
}

// U(T) = exp(-i H T) through the self-adjoint eigendecomposition of H.
inline UnitaryMatrix exp_evolution(const HamiltonianOperator& h, double duration) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.inner);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("self-adjoint eigendecomposition failed");
    const Eigen::Index d = h.dim();
    ComplexVector phases(d);
    for (Eigen::Index j = 0; j < d; ++j)
        phases(j) = std::polar(1.0, -es.eigenvalues()(j) * duration);
    ComplexMatrix v = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return UnitaryMatrix(std::move(v));
}

inline UnitaryMatrix exp_evolution(const HamiltonianOperator& h) {
    return exp_evolution(h, h.time_step);
}

// n applications of the one-step map
inline StateVector evolve(const UnitaryMatrix& u, const StateVector& psi0, long steps) {
    if (psi0.dim() != u.dim())
        throw std::invalid_argument("state dimension does not match operator dimension");
    if (steps < 0)
        throw std::invalid_argument("step count must be non-negative");
    ComplexVector a = psi0.amplitudes;
    for (long s = 0; s < steps; ++s)
        a = u.inner * a;
    return StateVector(psi0.basis, std::move(a));
}

// Global phase aligning b with a in the least-squares sense: arg tr(b+ a).
// Matrices with zero overlap keep phase 0.
inline Complex optimal_alignment_phase(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("phase alignment requires equal shapes");
    const Complex overlap = (b.adjoint() * a).trace();
    return std::polar(1.0, std::arg(overlap));
}

inline ComplexMatrix align_global_phase(const ComplexMatrix& a, const ComplexMatrix& b) {
    return optimal_alignment_phase(a, b) * b;
}

// max-abs entrywise distance after optimal global-phase alignment
inline double global_phase_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - align_global_phase(a, b)).cwiseAbs().maxCoeff();
}

} // namespace mplab
