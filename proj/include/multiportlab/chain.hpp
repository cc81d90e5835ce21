#pragma once

// Two-leg ladder lattice of three-port coins: directed-edge state space
// |m, j, D> (site m, branch j in {+1, 0, -1}, direction L/R), first-principles
// chain operators, the direction-projected three-band operator, its momentum
// space 3x3 form, closed-form band formulas, crossing detection, and a
// cross-validation report comparing the closed forms against the
// first-principles construction.

#include "core.hpp"
#include "su3.hpp"
#include "format.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace mplab {

enum class Direction { L, R };

// L means leftward on a horizontal branch or upward on the vertical branch;
// R means rightward or downward.
struct ChainLabel {
    int m = 0;         // site 0..N-1
    int j = 0;         // branch: +1 upper, 0 vertical, -1 lower
    Direction d = Direction::L;
};

namespace detail {
inline int branch_slot(int j) {
    switch (j) {
        case 1: return 0;
        case 0: return 1;
        case -1: return 2;
        default: throw std::invalid_argument("branch label must be -1, 0 or +1");
    }
}
inline int slot_branch(int slot) {
    static constexpr int branches[3] = {1, 0, -1};
    return branches[slot];
}
} // namespace detail

// canonical full-basis ordering: site-major, branch in (+1, 0, -1), then (L, R)
inline int chain_index(const ChainLabel& l, int sites) {
    if (l.m < 0 || l.m >= sites) throw std::invalid_argument("site index out of range");
    return 6 * l.m + 2 * detail::branch_slot(l.j) + (l.d == Direction::R ? 1 : 0);
}

inline ChainLabel chain_label(int index, int sites) {
    if (index < 0 || index >= 6 * sites) throw std::invalid_argument("basis index out of range");
    ChainLabel l;
    l.m = index / 6;
    l.j = detail::slot_branch((index % 6) / 2);
    l.d = (index % 2) ? Direction::R : Direction::L;
    return l;
}

// Hermitian lattice operator over the full 6N-dim directed basis or the
// projected 3N-dim direction-summed basis; boundary conditions are periodic.
struct ChainOperator {
    int sites = 0;
    ComplexMatrix matrix;
    bool projected = false;
};

// Raw per-cell transition-term assembly on the directed basis: six
// direction-flip terms of weight 1/3 and twelve hopping terms of weight -2/3
// per cell, with periodic site arithmetic. These are the one-step transition
// amplitudes of the ladder of three-port coins written as |to><from| terms
// (equal to +i times the ladder's one-step network unitary); the list is not
// self-adjoint term by term, see build_full_chain.
inline ComplexMatrix chain_terms_raw(int sites) {
    if (sites < 2) throw std::invalid_argument("chain requires at least two sites");
    const int dim = 6 * sites;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    const double flip = 1.0 / 3.0;
    const double hop = -2.0 / 3.0;
    const auto add = [&](int m_to, int j_to, Direction d_to, int m_from, int j_from, Direction d_from,
                         double amp) {
        const int mt = ((m_to % sites) + sites) % sites;
        const int mf = ((m_from % sites) + sites) % sites;
        h(chain_index({mt, j_to, d_to}, sites), chain_index({mf, j_from, d_from}, sites)) += amp;
    };
    const Direction L = Direction::L;
    const Direction R = Direction::R;
    for (int m = 0; m < sites; ++m) {
        for (int j : {-1, 0, 1}) {
            add(m, j, R, m, j, L, flip);
            add(m, j, L, m, j, R, flip);
        }
        add(m, +1, R, m, 0, L, hop);
        add(m, 0, R, m, +1, L, hop);
        add(m, -1, R, m, 0, R, hop);
        add(m, 0, L, m, -1, L, hop);
        add(m - 1, +1, L, m, 0, L, hop);
        add(m - 1, -1, L, m, 0, R, hop);
        add(m - 1, +1, L, m, +1, L, hop);
        add(m - 1, -1, L, m, -1, L, hop);
        add(m + 1, +1, R, m, +1, R, hop);
        add(m + 1, 0, R, m, +1, R, hop);
        add(m + 1, -1, R, m, -1, R, hop);
        add(m + 1, 0, L, m, -1, R, hop);
    }
    return h;
}

// Full-chain Hermitian operator: the raw transition terms symmetrized via
// H <- (H + H+)/2. The raw list lacks some conjugate partners, so the
// symmetrization is the minimal repair that yields a self-adjoint generator;
// the deviation is quantified by consistency_report, not hidden.
inline ChainOperator build_full_chain(int sites) {
    ComplexMatrix raw = chain_terms_raw(sites);
    ComplexMatrix h = 0.5 * (raw + raw.adjoint().eval());
    return ChainOperator{sites, std::move(h), false};
}

// isometry P: |m, j> -> (|m, j, L> + |m, j, R>)/sqrt(2); projected basis
// ordering 3m + slot(j) with the same branch order (+1, 0, -1)
inline ComplexMatrix direction_sum_isometry(int sites) {
    ComplexMatrix p = ComplexMatrix::Zero(6 * sites, 3 * sites);
    const double s = 1.0 / std::sqrt(2.0);
    for (int m = 0; m < sites; ++m)
        for (int slot = 0; slot < 3; ++slot) {
            const int j = detail::slot_branch(slot);
            p(chain_index({m, j, Direction::L}, sites), 3 * m + slot) = s;
            p(chain_index({m, j, Direction::R}, sites), 3 * m + slot) = s;
        }
    return p;
}

// P+ H P: the chain operator on the direction-summed 3N-dim basis
inline ChainOperator project_chain(const ChainOperator& full) {
    if (full.projected || full.matrix.rows() != 6 * full.sites)
        throw std::invalid_argument("project_chain expects a full 6N-dimensional chain operator");
    const ComplexMatrix p = direction_sum_isometry(full.sites);
    ComplexMatrix h = p.adjoint() * full.matrix * p;
    return ChainOperator{full.sites, std::move(h), true};
}

// translation by one site on the full (6N) or projected (3N) basis
inline ComplexMatrix site_shift_operator(int sites, bool projected) {
    const int internal = projected ? 3 : 6;
    const int dim = internal * sites;
    ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
    for (int m = 0; m < sites; ++m)
        for (int a = 0; a < internal; ++a)
            s(internal * ((m + 1) % sites) + a, internal * m + a) = 1.0;
    return s;
}

inline double shift_commutator_residual(const ChainOperator& op) {
    const ComplexMatrix s = site_shift_operator(op.sites, op.projected);
    return (op.matrix * s - s * op.matrix).cwiseAbs().maxCoeff();
}

// Momentum-space 3x3 operator in the branch basis (+1, 0, -1), real prefactor
// 1/3 (the Hermitian choice consistent with real band energies):
//   (1/3) [[1-2sqrt2 cos k,      -2sqrt2 e^{ik/2} cos(k/2), 0                        ],
//          [-2sqrt2 e^{-ik/2} c,  1,                        -2sqrt2 e^{-ik/2} cos(k/2)],
//          [0,                    -2sqrt2 e^{ik/2} cos(k/2), 1-2sqrt2 cos k           ]]
inline ComplexMatrix bloch_hamiltonian(double k) {
    const double r2 = std::sqrt(2.0);
    const double corner = (1.0 - 2.0 * r2 * std::cos(k)) / 3.0;
    const Complex coupling = std::polar(-2.0 * r2 * std::cos(0.5 * k) / 3.0, 0.5 * k);
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = corner;
    h(1, 1) = 1.0 / 3.0;
    h(2, 2) = corner;
    h(0, 1) = coupling;
    h(1, 0) = std::conj(coupling);
    h(1, 2) = std::conj(coupling);
    h(2, 1) = coupling;
    return h;
}

// Closed-form band formulas (formula labels, NOT sorted):
//   E1 = (1 - 2 sqrt2 cos k)/3, E2 = (1 - 2 sqrt2 (1 - cos k))/3,
//   E3 = (1 + 2 sqrt2)/3 (flat). They satisfy E1+E2+E3 = 1 identically.
inline std::array<double, 3> band_energies_closed_form(double k) {
    const double r2 = std::sqrt(2.0);
    return {(1.0 - 2.0 * r2 * std::cos(k)) / 3.0,
            (1.0 - 2.0 * r2 * (1.0 - std::cos(k))) / 3.0,
            (1.0 + 2.0 * r2) / 3.0};
}

// Companion closed-form eigenvector ansatz (normalized). Kept for reporting
// only: the set is not mutually orthogonal (psi1.psi3 = 2 and
// psi2.psi3 = -8(1 + cos k) before normalization), so it cannot be the
// eigenbasis of a Hermitian operator away from degeneracies. BandStructure
// always carries numerically diagonalized eigenvectors instead.
inline std::array<Eigen::Vector3d, 3> band_eigenvectors_closed_form(double k) {
    const double r2 = std::sqrt(2.0);
    Eigen::Vector3d v1(-1.0, 0.0, 1.0);
    Eigen::Vector3d v2(1.0, -2.0 * r2, 1.0);
    Eigen::Vector3d v3(-1.0, 2.0 * r2 * (1.0 + std::cos(k)), 1.0);
    return {v1.normalized(), v2.normalized(), v3.normalized()};
}

// Companion closed-form generator-coefficient formulas for the momentum-space
// operator (d0 plus the eight Gell-Mann coefficients). The off-diagonal
// coefficients agree with the trace decomposition of bloch_hamiltonian; the
// diagonal ones (d3, d8) do not, which consistency_report quantifies.
inline GellMannCoefficients bloch_coefficients_closed_form(double k) {
    const double r2 = std::sqrt(2.0);
    const double r3 = std::sqrt(3.0);
    GellMannCoefficients c;
    c.d0 = (1.0 - (4.0 * r2 / 3.0) * std::cos(k)) / 3.0;
    c.d[0] = -(r2 / 3.0) * (1.0 + std::cos(k)); // L1
    c.d[1] = (r2 / 3.0) * std::sin(k);          // L2
    c.d[2] = -r2 / 3.0;                         // L3
    c.d[3] = 0.0;                               // L4
    c.d[4] = 0.0;                               // L5
    c.d[5] = -(r2 / 3.0) * (1.0 + std::cos(k)); // L6
    c.d[6] = -(r2 / 3.0) * std::sin(k);         // L7
    c.d[7] = r2 / (3.0 * r3);                   // L8
    return c;
}

enum class BandSource { closed_form, numerical };

// Sampled band structure over k_grid = 2 pi n / samples. Energies are stored
// as ascending triples per k. Eigenvectors always come from numerically
// diagonalizing the momentum-space operator (orthonormal per k), whatever the
// energy provenance.
struct BandStructure {
    std::vector<double> k_grid;
    std::vector<std::array<double, 3>> energies;
    std::vector<Eigen::Matrix3cd> eigenvectors;
    BandSource provenance = BandSource::closed_form;
};

namespace detail {

inline std::array<double, 3> sorted_triple(std::array<double, 3> t) {
    std::sort(t.begin(), t.end());
    return t;
}

// continuous sorted-band evaluator for a provenance
inline std::array<double, 3> sorted_bands_at(BandSource src, double k) {
    if (src == BandSource::closed_form)
        return sorted_triple(band_energies_closed_form(k));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(bloch_hamiltonian(k));
    return {es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
}

// Argmin of a non-negative valley on [a, b]: ternary interval reduction with
// deterministic tie-breaking, then a parabolic vertex polish kept only when it
// improves the value.
template <typename F>
double refine_minimum(F&& f, double a, double b) {
    double lo = a, hi = b;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (f(m1) <= f(m2)) hi = m2;
        else lo = m1;
    }
    const double kt = 0.5 * (lo + hi);
    const double h = 1e-5;
    const double g0 = f(kt - h), g1 = f(kt), g2 = f(kt + h);
    const double denom = g0 - 2.0 * g1 + g2;
    if (denom > 0.0) {
        const double kp = kt + 0.5 * h * (g0 - g2) / denom;
        if (std::isfinite(kp) && std::abs(kp - kt) <= h && f(kp) < g1) return kp;
    }
    return kt;
}

} // namespace detail

inline BandStructure band_structure(BandSource source, int samples) {
    if (samples < 3) throw std::invalid_argument("band_structure requires at least 3 samples");
    BandStructure out;
    out.provenance = source;
    out.k_grid.reserve(static_cast<size_t>(samples));
    out.energies.reserve(static_cast<size_t>(samples));
    out.eigenvectors.reserve(static_cast<size_t>(samples));
    for (int n = 0; n < samples; ++n) {
        const double k = kTwoPi * n / samples;
        out.k_grid.push_back(k);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(bloch_hamiltonian(k));
        if (es.info() != Eigen::Success)
            throw std::runtime_error("momentum-space diagonalization failed");
        if (source == BandSource::numerical) {
            out.energies.push_back({es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)});
        } else {
            out.energies.push_back(detail::sorted_triple(band_energies_closed_form(k)));
        }
        out.eigenvectors.push_back(es.eigenvectors());
    }
    return out;
}

// Quasi-momenta in [0, 2 pi) where adjacent sorted bands touch within tol.
// Candidate intervals come from local minima of the sampled gaps (with a
// slope-aware detection threshold, so constant-gap data yields no seeds);
// each candidate is refined against the provenance's continuous evaluator and
// kept when the refined gap is <= tol. A sampled gap of exactly zero
// short-circuits to its grid point. Refined points closer than 1e-7 merge.
inline std::vector<double> crossing_points(const BandStructure& bands, double tol) {
    if (tol < 0.0) throw std::invalid_argument("crossing tolerance must be non-negative");
    const int samples = static_cast<int>(bands.k_grid.size());
    if (samples < 3) throw std::invalid_argument("crossing detection needs at least 3 sampled points");
    const double dk = kTwoPi / samples;

    std::vector<double> found;
    for (int pair = 0; pair < 2; ++pair) {
        std::vector<double> g(static_cast<size_t>(samples));
        for (int n = 0; n < samples; ++n)
            g[static_cast<size_t>(n)] =
                bands.energies[static_cast<size_t>(n)][static_cast<size_t>(pair + 1)] -
                bands.energies[static_cast<size_t>(n)][static_cast<size_t>(pair)];
        double slope = 0.0;
        for (int n = 0; n < samples; ++n)
            slope = std::max(slope, std::abs(g[static_cast<size_t>((n + 1) % samples)] -
                                             g[static_cast<size_t>(n)]) / dk);
        const double detect = tol + 2.0 * slope * dk;

        const auto gap_at = [&](double k) {
            const auto t = detail::sorted_bands_at(bands.provenance, k);
            return t[static_cast<size_t>(pair + 1)] - t[static_cast<size_t>(pair)];
        };

        for (int n = 0; n < samples; ++n) {
            const double gn = g[static_cast<size_t>(n)];
            const double gl = g[static_cast<size_t>((n - 1 + samples) % samples)];
            const double gr = g[static_cast<size_t>((n + 1) % samples)];
            if (gn > gl || gn > gr || gn > detect) continue;
            const double kn = bands.k_grid[static_cast<size_t>(n)];
            double k_star;
            double gap_star;
            if (gn == 0.0) {
                k_star = kn;
                gap_star = 0.0;
            } else {
                k_star = detail::refine_minimum(gap_at, kn - dk, kn + dk);
                gap_star = gap_at(k_star);
            }
            if (gap_star <= tol) {
                double kw = std::fmod(k_star, kTwoPi);
                if (kw < 0.0) kw += kTwoPi;
                found.push_back(kw);
            }
        }
    }

    std::sort(found.begin(), found.end());
    std::vector<double> merged;
    for (double k : found) {
        if (!merged.empty() && std::abs(k - merged.back()) < 1e-7) continue;
        if (!merged.empty() && std::abs(k + kTwoPi - merged.back()) < 1e-7) continue;
        merged.push_back(k);
    }
    // periodic wrap: first and last may be the same crossing
    if (merged.size() > 1 && std::abs(merged.front() + kTwoPi - merged.back()) < 1e-7)
        merged.pop_back();
    return merged;
}

// Band-line identity across k by eigenvector overlap continuity: for each
// consecutive k the sorted slots are re-labeled to maximize total overlap with
// the previous labeling (falling back to sorted order at near-degeneracies).
// Returns one permutation per k: entry [line] = sorted slot carrying that line.
inline std::vector<std::array<int, 3>> track_band_permutations(const BandStructure& bands,
                                                               double degeneracy_tol = 1e-9) {
    static constexpr std::array<std::array<int, 3>, 6> perms{{{0, 1, 2},
                                                              {0, 2, 1},
                                                              {1, 0, 2},
                                                              {1, 2, 0},
                                                              {2, 0, 1},
                                                              {2, 1, 0}}};
    std::vector<std::array<int, 3>> out;
    out.reserve(bands.k_grid.size());
    std::array<int, 3> current{0, 1, 2};
    out.push_back(current);
    for (size_t n = 1; n < bands.k_grid.size(); ++n) {
        const auto& e = bands.energies[n];
        const bool degenerate = (e[1] - e[0] < degeneracy_tol) || (e[2] - e[1] < degeneracy_tol);
        if (degenerate) {
            out.push_back(current);
            continue;
        }
        const Eigen::Matrix3cd& prev = bands.eigenvectors[n - 1];
        const Eigen::Matrix3cd& next = bands.eigenvectors[n];
        double best = -1.0;
        std::array<int, 3> best_perm = current;
        for (const auto& p : perms) {
            double total = 0.0;
            for (int line = 0; line < 3; ++line) {
                const int prev_slot = current[static_cast<size_t>(line)];
                const int next_slot = p[static_cast<size_t>(line)];
                total += std::abs(prev.col(prev_slot).dot(next.col(next_slot)));
            }
            if (total > best + 1e-12) {
                best = total;
                best_perm = p;
            }
        }
        current = best_perm;
        out.push_back(current);
    }
    return out;
}

// first-principles momentum block of a projected chain at on-grid k = 2 pi n/N
inline ComplexMatrix ring_bloch_block(const ChainOperator& projected, double k) {
    if (!projected.projected)
        throw std::invalid_argument("ring_bloch_block expects a projected chain operator");
    const int sites = projected.sites;
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    for (int r = 0; r < sites; ++r) {
        const Complex phase = std::polar(1.0, k * r);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                h(a, b) += phase * projected.matrix(a, 3 * r + b);
    }
    return Complex(0.5, 0.0) * (h + h.adjoint().eval());
}

// Cross-validation summary: closed-form formulas vs numerical momentum-space
// bands vs the first-principles ring construction, sum/trace rules, crossing
// pattern match, the non-orthogonality of the companion eigenvector ansatz,
// and per-coefficient deviations of the companion generator-coefficient
// formulas. Reports, never asserts.
struct ComparisonReport {
    int sites = 0;
    int samples = 0;

    std::vector<double> k_grid;
    std::vector<std::array<double, 3>> closed_form_sorted;
    std::vector<std::array<double, 3>> numerical_sorted;
    std::vector<double> band_deviation;
    double band_deviation_max = 0.0;
    double closed_sum_rule_residual_max = 0.0;
    double numerical_trace_residual_max = 0.0;

    std::vector<double> ring_k;
    std::vector<std::array<double, 3>> ring_sorted;
    std::vector<double> ring_vs_numerical_deviation;
    double ring_vs_numerical_deviation_max = 0.0;
    double chain_hermiticity_residual = 0.0;
    double chain_shift_commutator_max = 0.0;
    double projected_diagonal_min = 0.0;
    double projected_diagonal_max = 0.0;

    std::vector<double> crossings_closed_form;
    std::vector<double> crossings_numerical;
    bool crossing_patterns_match = false;

    double psi1_dot_psi2 = 0.0;
    double psi1_dot_psi3 = 0.0;
    double psi2_dot_psi3_max_abs = 0.0;

    std::array<double, 9> coefficient_deviation_max{};
};

inline ComparisonReport consistency_report(int sites, int samples) {
    if (sites < 8) throw std::invalid_argument("consistency_report requires at least 8 sites");
    if (samples < 3) throw std::invalid_argument("consistency_report requires at least 3 samples");
    ComparisonReport rep;
    rep.sites = sites;
    rep.samples = samples;

    // dense momentum sweep
    for (int n = 0; n < samples; ++n) {
        const double k = kTwoPi * n / samples;
        rep.k_grid.push_back(k);

        const auto formulas = band_energies_closed_form(k);
        rep.closed_sum_rule_residual_max =
            std::max(rep.closed_sum_rule_residual_max,
                     std::abs(formulas[0] + formulas[1] + formulas[2] - 1.0));
        rep.closed_form_sorted.push_back(detail::sorted_triple(formulas));

        const ComplexMatrix hk = bloch_hamiltonian(k);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hk);
        const std::array<double, 3> numeric{es.eigenvalues()(0), es.eigenvalues()(1),
                                            es.eigenvalues()(2)};
        rep.numerical_sorted.push_back(numeric);
        rep.numerical_trace_residual_max =
            std::max(rep.numerical_trace_residual_max,
                     std::abs(numeric[0] + numeric[1] + numeric[2] - hk.trace().real()));

        double dev = 0.0;
        for (int b = 0; b < 3; ++b)
            dev = std::max(dev, std::abs(numeric[static_cast<size_t>(b)] -
                                         rep.closed_form_sorted.back()[static_cast<size_t>(b)]));
        rep.band_deviation.push_back(dev);
        rep.band_deviation_max = std::max(rep.band_deviation_max, dev);

        // companion coefficient formulas vs trace decomposition
        const GellMannCoefficients printed = bloch_coefficients_closed_form(k);
        const GellMannCoefficients traced = su3_decompose(hk);
        rep.coefficient_deviation_max[0] =
            std::max(rep.coefficient_deviation_max[0], std::abs(printed.d0 - traced.d0));
        for (int j = 0; j < 8; ++j)
            rep.coefficient_deviation_max[static_cast<size_t>(j + 1)] =
                std::max(rep.coefficient_deviation_max[static_cast<size_t>(j + 1)],
                         std::abs(printed.d[static_cast<size_t>(j)] - traced.d[static_cast<size_t>(j)]));

        // companion eigenvector ansatz diagnostics (pre-normalization dots)
        const double r2 = std::sqrt(2.0);
        const Eigen::Vector3d v1(-1.0, 0.0, 1.0);
        const Eigen::Vector3d v2(1.0, -2.0 * r2, 1.0);
        const Eigen::Vector3d v3(-1.0, 2.0 * r2 * (1.0 + std::cos(k)), 1.0);
        rep.psi1_dot_psi2 = v1.dot(v2);
        rep.psi1_dot_psi3 = v1.dot(v3);
        rep.psi2_dot_psi3_max_abs = std::max(rep.psi2_dot_psi3_max_abs, std::abs(v2.dot(v3)));
    }

    // first-principles ring at its own discrete momenta
    const ChainOperator full = build_full_chain(sites);
    rep.chain_hermiticity_residual = hermiticity_residual(full.matrix);
    rep.chain_shift_commutator_max = shift_commutator_residual(full);
    const ChainOperator projected = project_chain(full);
    rep.projected_diagonal_min = projected.matrix.diagonal().real().minCoeff();
    rep.projected_diagonal_max = projected.matrix.diagonal().real().maxCoeff();
    for (int n = 0; n < sites; ++n) {
        const double k = kTwoPi * n / sites;
        rep.ring_k.push_back(k);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> ringsolve(ring_bloch_block(projected, k));
        const std::array<double, 3> ring{ringsolve.eigenvalues()(0), ringsolve.eigenvalues()(1),
                                         ringsolve.eigenvalues()(2)};
        rep.ring_sorted.push_back(ring);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> dense(bloch_hamiltonian(k));
        double dev = 0.0;
        for (int b = 0; b < 3; ++b)
            dev = std::max(dev, std::abs(ring[static_cast<size_t>(b)] -
                                         dense.eigenvalues()(b)));
        rep.ring_vs_numerical_deviation.push_back(dev);
        rep.ring_vs_numerical_deviation_max = std::max(rep.ring_vs_numerical_deviation_max, dev);
    }

    // crossing patterns under both provenances
    rep.crossings_closed_form = crossing_points(band_structure(BandSource::closed_form, samples), 1e-6);
    rep.crossings_numerical = crossing_points(band_structure(BandSource::numerical, samples), 1e-6);
    rep.crossing_patterns_match =
        rep.crossings_closed_form.size() == rep.crossings_numerical.size();
    if (rep.crossing_patterns_match)
        for (size_t i = 0; i < rep.crossings_closed_form.size(); ++i)
            if (std::abs(rep.crossings_closed_form[i] - rep.crossings_numerical[i]) > 1e-6)
                rep.crossing_patterns_match = false;

    return rep;
}

namespace detail {
inline void write_triples(JsonWriter& w, const std::vector<std::array<double, 3>>& rows) {
    w.begin_array();
    for (const auto& t : rows) {
        w.begin_array(true);
        w.value(t[0]).value(t[1]).value(t[2]);
        w.end_array();
    }
    w.end_array();
}
inline void write_reals(JsonWriter& w, const std::vector<double>& xs) {
    w.begin_array(true);
    for (double x : xs) w.value(x);
    w.end_array();
}
} // namespace detail

// deterministic JSON form of the report (byte-identical across runs)
inline std::string report_to_json(const ComparisonReport& rep) {
    JsonWriter w;
    w.begin_object();
    w.key("sites").value(rep.sites);
    w.key("samples").value(rep.samples);
    w.key("k_grid");
    detail::write_reals(w, rep.k_grid);
    w.key("closed_form_sorted");
    detail::write_triples(w, rep.closed_form_sorted);
    w.key("numerical_sorted");
    detail::write_triples(w, rep.numerical_sorted);
    w.key("band_deviation");
    detail::write_reals(w, rep.band_deviation);
    w.key("band_deviation_max").value(rep.band_deviation_max);
    w.key("closed_sum_rule_residual_max").value(rep.closed_sum_rule_residual_max);
    w.key("numerical_trace_residual_max").value(rep.numerical_trace_residual_max);
    w.key("ring_k");
    detail::write_reals(w, rep.ring_k);
    w.key("ring_sorted");
    detail::write_triples(w, rep.ring_sorted);
    w.key("ring_vs_numerical_deviation");
    detail::write_reals(w, rep.ring_vs_numerical_deviation);
    w.key("ring_vs_numerical_deviation_max").value(rep.ring_vs_numerical_deviation_max);
    w.key("chain_hermiticity_residual").value(rep.chain_hermiticity_residual);
    w.key("chain_shift_commutator_max").value(rep.chain_shift_commutator_max);
    w.key("projected_diagonal_min").value(rep.projected_diagonal_min);
    w.key("projected_diagonal_max").value(rep.projected_diagonal_max);
    w.key("crossings_closed_form");
    detail::write_reals(w, rep.crossings_closed_form);
    w.key("crossings_numerical");
    detail::write_reals(w, rep.crossings_numerical);
    w.key("crossing_patterns_match").value(rep.crossing_patterns_match);
    w.key("companion_eigenvector_dots");
    w.begin_object();
    w.key("psi1_dot_psi2").value(rep.psi1_dot_psi2);
    w.key("psi1_dot_psi3").value(rep.psi1_dot_psi3);
    w.key("psi2_dot_psi3_max_abs").value(rep.psi2_dot_psi3_max_abs);
    w.end_object();
    w.key("coefficient_deviation_max");
    w.begin_array(true);
    for (double x : rep.coefficient_deviation_max) w.value(x);
    w.end_array();
    w.end_object();
    return w.str();
}

// band CSV export: header `k,E1,E2,E3,source`, 17 significant digits
inline std::string bands_to_csv(const BandStructure& bands) {
    const char* source = bands.provenance == BandSource::closed_form ? "closed_form" : "numerical";
    std::string out = "k,E1,E2,E3,source\n";
    for (size_t n = 0; n < bands.k_grid.size(); ++n) {
        out += csv_join({fmt17(bands.k_grid[n]), fmt17(bands.energies[n][0]),
                         fmt17(bands.energies[n][1]), fmt17(bands.energies[n][2]), source});
    }
    return out;
}

} // namespace mplab
