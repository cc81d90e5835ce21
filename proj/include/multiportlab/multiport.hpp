#pragma once

// Directionally-unbiased multiport devices: the n-port Grover-coin unitary,
// the strictly balanced three-port, exit-probability readout, and a
// deterministic sorted eigensystem for unitary operators.
//
// Port labels are 0-based throughout; for three-ports the conventional names
// are A = 0, B = 1, C = 2.

#include "core.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <vector>

namespace mplab {

enum class MultiportKind { grover, strict_three, doubled_grover, custom };

// Declarative description of a multiport device (used by the network format).
// vertex_phases parameterize kind::custom devices assembled from internal
// beam-splitter/mirror construction; other kinds ignore it.
struct MultiportSpec {
    int n = 3;
    MultiportKind kind = MultiportKind::grover;
    std::vector<double> vertex_phases;
};

struct ExitDistribution {
    int input_port = 0;
    std::vector<double> probabilities; // sums to 1 within 1e-12 for unitary sources
};

// The n-port coin: diagonal -i(n-2)/n, off-diagonal +2i/n. Unitary for every
// n >= 2 and squares to -I. Note the degenerate n = 2 case has zero diagonal
// (the device is a plain phase-flip swap [[0, i], [i, 0]]); it is admitted.
inline UnitaryMatrix grover_unitary(int n) {
    if (n < 2) throw std::invalid_argument("grover_unitary requires n >= 2");
    const Complex diag(0.0, -(static_cast<double>(n) - 2.0) / n);
    const Complex off(0.0, 2.0 / n);
    ComplexMatrix m = ComplexMatrix::Constant(n, n, off);
    m.diagonal().setConstant(diag);
    return UnitaryMatrix(std::move(m));
}

// The strictly balanced three-port: all nine exit probabilities equal 1/3.
// Diagonal 1/sqrt(3), off-diagonal e^{2 pi i/3}/sqrt(3).
inline UnitaryMatrix strict_three_port() {
    const double s = 1.0 / std::sqrt(3.0);
    const Complex off = std::polar(s, 2.0 * kPi / 3.0);
    ComplexMatrix m = ComplexMatrix::Constant(3, 3, off);
    m.diagonal().setConstant(Complex(s, 0.0));
    return UnitaryMatrix(std::move(m));
}

// Squared magnitudes of the input port's column: the probability of exiting
// at each port after one pass through the device.
inline ExitDistribution exit_probabilities(const UnitaryMatrix& u, int input_port) {
    if (input_port < 0 || input_port >= u.dim())
        throw std::out_of_range("input port out of range");
    ExitDistribution dist;
    dist.input_port = input_port;
    dist.probabilities.resize(static_cast<size_t>(u.dim()));
    for (Eigen::Index r = 0; r < u.dim(); ++r)
        dist.probabilities[static_cast<size_t>(r)] = std::norm(u.inner(r, input_port));
    const double total = std::accumulate(dist.probabilities.begin(), dist.probabilities.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12)
        throw std::runtime_error("exit probabilities do not sum to 1 within 1e-12");
    return dist;
}

struct EigenSystem {
    ComplexVector eigenvalues;  // sorted by eigenphase arg in (-pi, pi], ascending
    ComplexMatrix eigenvectors; // column j pairs with eigenvalue j; orthonormal
};

namespace detail {

// rotate v so its largest-magnitude entry (first index on near-ties) is real
// and positive; canonical representative of the ray through v
inline ComplexVector phase_align_vector(const ComplexVector& v) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > best + 1e-12) {
            best = a;
            pivot = i;
        }
    }
    if (best <= 0.0) return v;
    return std::polar(1.0, -std::arg(v(pivot))) * v;
}

inline bool lexicographic_less(const ComplexVector& a, const ComplexVector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
        if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
    }
    return false;
}

} // namespace detail

// Deterministic eigensystem of a unitary operator. U is normal, so a Schur
// factorization is already an eigendecomposition with orthonormal columns.
// Eigenpairs are sorted by eigenphase ascending; eigenphases equal within
// 1e-9 are tie-broken by lexicographic order of the phase-aligned vectors.
inline EigenSystem eigensystem(const UnitaryMatrix& u) {
    Eigen::ComplexSchur<ComplexMatrix> schur(u.inner);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("Schur factorization failed");
    const Eigen::Index d = u.dim();

    std::vector<std::pair<Complex, ComplexVector>> pairs;
    pairs.reserve(static_cast<size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j)
        pairs.emplace_back(schur.matrixT()(j, j), detail::phase_align_vector(schur.matrixU().col(j)));

    std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
        const double px = std::arg(x.first);
        const double py = std::arg(y.first);
        if (std::abs(px - py) > 1e-9) return px < py;
        return detail::lexicographic_less(x.second, y.second);
    });

    EigenSystem out;
    out.eigenvalues.resize(d);
    out.eigenvectors.resize(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        out.eigenvalues(j) = pairs[static_cast<size_t>(j)].first;
        out.eigenvectors.col(j) = pairs[static_cast<size_t>(j)].second;
    }
    return out;
}

// eigenphases in (-pi, pi], same order as EigenSystem::eigenvalues
inline RealVector eigenphases(const EigenSystem& es) {
    RealVector out(es.eigenvalues.size());
    for (Eigen::Index j = 0; j < es.eigenvalues.size(); ++j)
        out(j) = std::arg(es.eigenvalues(j));
    return out;
}

} // namespace mplab
