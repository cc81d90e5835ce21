#pragma once

// Steady-state coherent scattering networks: beam-splitter and mirror nodes
// wired by phase-tagged internal edges, solved for the effective external
// S-matrix by summing all internal paths in closed form. Includes the
// three-splitter ring assembly whose effective matrix realizes the
// directionally-unbiased three-port coin, together with the calibrated
// propagation/reflection conventions that reproduce it.

#include "core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace mplab {

// scattering node: local unitary over named ports, out = smatrix * in
struct ScatterNode {
    std::string id;
    ComplexMatrix smatrix;
    std::vector<std::string> ports; // globally unique labels, one per row/col
};

// undirected internal connection; the phase is acquired per traversal in
// either direction (propagation over a fixed path length)
struct ScatterEdge {
    std::string port_a;
    std::string port_b;
    double phase = 0.0;
};

struct ScatterNetwork {
    std::vector<ScatterNode> nodes;
    std::vector<ScatterEdge> internal_edges;
    std::vector<std::string> external_ports; // ordering fixes the S_eff basis
};

namespace detail {

struct ScatterPartition {
    ComplexMatrix s_ee, s_ei, s_ie, s_ii; // node-scattering blocks, in -> out
    ComplexMatrix c;                      // internal out -> internal in, with edge phases
};

inline std::map<std::string, int> scatter_port_index(const ScatterNetwork& net) {
    std::map<std::string, int> index;
    int next = 0;
    for (const auto& node : net.nodes) {
        if (node.smatrix.rows() != node.smatrix.cols())
            throw std::invalid_argument("node '" + node.id + "' has a non-square scattering matrix");
        if (static_cast<Eigen::Index>(node.ports.size()) != node.smatrix.rows())
            throw std::invalid_argument("node '" + node.id + "' port count does not match its matrix");
        if (unitarity_residual(node.smatrix) > 1e-10)
            throw std::invalid_argument("node '" + node.id + "' scattering matrix is not unitary");
        for (const auto& p : node.ports) {
            if (!index.emplace(p, next++).second)
                throw std::invalid_argument("duplicate port label '" + p + "'");
        }
    }
    return index;
}

inline ScatterPartition partition_network(const ScatterNetwork& net) {
    const auto index = scatter_port_index(net);
    const int total = static_cast<int>(index.size());

    std::vector<int> usage(static_cast<size_t>(total), 0);
    const auto lookup = [&](const std::string& label) {
        const auto it = index.find(label);
        if (it == index.end()) throw std::invalid_argument("unknown port label '" + label + "'");
        return it->second;
    };

    for (const auto& label : net.external_ports) ++usage[static_cast<size_t>(lookup(label))];
    for (const auto& e : net.internal_edges) {
        if (!std::isfinite(e.phase)) throw std::invalid_argument("edge phase must be finite");
        const int a = lookup(e.port_a);
        const int b = lookup(e.port_b);
        if (a == b) throw std::invalid_argument("edge loops port '" + e.port_a + "' to itself");
        ++usage[static_cast<size_t>(a)];
        ++usage[static_cast<size_t>(b)];
    }
    for (const auto& [label, idx] : index) {
        if (usage[static_cast<size_t>(idx)] == 0)
            throw std::invalid_argument("dangling port '" + label + "'");
        if (usage[static_cast<size_t>(idx)] > 1)
            throw std::invalid_argument("port '" + label + "' used more than once");
    }

    // global node-scattering block, incoming -> outgoing
    ComplexMatrix s = ComplexMatrix::Zero(total, total);
    {
        int base = 0;
        for (const auto& node : net.nodes) {
            const int n = static_cast<int>(node.smatrix.rows());
            s.block(base, base, n, n) = node.smatrix;
            base += n;
        }
    }

    // external ordering per net.external_ports; internal in global port order
    std::vector<int> ext, internal;
    std::vector<char> is_ext(static_cast<size_t>(total), 0);
    for (const auto& label : net.external_ports) {
        const int idx = lookup(label);
        ext.push_back(idx);
        is_ext[static_cast<size_t>(idx)] = 1;
    }
    for (const auto& [label, idx] : index)
        if (!is_ext[static_cast<size_t>(idx)]) internal.push_back(idx);
    std::sort(internal.begin(), internal.end());

    const int ne = static_cast<int>(ext.size());
    const int ni = static_cast<int>(internal.size());
    std::vector<int> internal_pos(static_cast<size_t>(total), -1);
    for (int i = 0; i < ni; ++i) internal_pos[static_cast<size_t>(internal[static_cast<size_t>(i)])] = i;

    ScatterPartition part;
    part.s_ee = ComplexMatrix::Zero(ne, ne);
    part.s_ei = ComplexMatrix::Zero(ne, ni);
    part.s_ie = ComplexMatrix::Zero(ni, ne);
    part.s_ii = ComplexMatrix::Zero(ni, ni);
    for (int r = 0; r < ne; ++r)
        for (int cidx = 0; cidx < ne; ++cidx)
            part.s_ee(r, cidx) = s(ext[static_cast<size_t>(r)], ext[static_cast<size_t>(cidx)]);
    for (int r = 0; r < ne; ++r)
        for (int cidx = 0; cidx < ni; ++cidx)
            part.s_ei(r, cidx) = s(ext[static_cast<size_t>(r)], internal[static_cast<size_t>(cidx)]);
    for (int r = 0; r < ni; ++r)
        for (int cidx = 0; cidx < ne; ++cidx)
            part.s_ie(r, cidx) = s(internal[static_cast<size_t>(r)], ext[static_cast<size_t>(cidx)]);
    for (int r = 0; r < ni; ++r)
        for (int cidx = 0; cidx < ni; ++cidx)
            part.s_ii(r, cidx) = s(internal[static_cast<size_t>(r)], internal[static_cast<size_t>(cidx)]);

    part.c = ComplexMatrix::Zero(ni, ni);
    for (const auto& e : net.internal_edges) {
        const int a = internal_pos[static_cast<size_t>(lookup(e.port_a))];
        const int b = internal_pos[static_cast<size_t>(lookup(e.port_b))];
        if (a < 0 || b < 0)
            throw std::invalid_argument("edge endpoint '" + e.port_a + "'/'" + e.port_b +
                                        "' is declared external");
        const Complex hop = std::polar(1.0, e.phase);
        part.c(b, a) = hop; // outgoing at a arrives incoming at b
        part.c(a, b) = hop;
    }
    return part;
}

} // namespace detail

// throws invalid_argument on any structural defect (the checks behind
// effective_smatrix, usable standalone)
inline void validate_scatter_network(const ScatterNetwork& net) {
    (void)detail::partition_network(net);
}

// Largest internal-loop eigenvalue magnitude: spectral radius of the one-bounce
// map (node scattering restricted to internal ports composed with edge
// propagation). The truncated path sum converges iff this is < 1.
inline double internal_loop_spectral_radius(const ScatterNetwork& net) {
    const auto part = detail::partition_network(net);
    if (part.s_ii.rows() == 0) return 0.0;
    const ComplexMatrix m = part.s_ii * part.c;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Effective external S-matrix: the coherent sum over all internal paths,
//   S_eff = S_EE + S_EI C (I - S_II C)^{-1} S_IE,
// where C carries the edge propagation phases. Lossless nodes give a unitary
// result.
//
// Singular (I - S_II C) directions are split by physics. A circulating mode
// can sit exactly on resonance while staying dark: unitarity forces any loop
// mode with unit gain to have zero overlap with the external drive (if it
// could be driven it would also leak, pulling its gain below one). Dark
// directions never enter the steady-state external response and are projected
// out. A singular direction that DOES couple to the drive has no steady state
// at all; that genuine resonance raises domain_error. This keeps exactly-on-
// resonance ring assemblies (whose dark modes are fed by nothing) solvable
// without ever inventing a limit for a driven divergence.
inline UnitaryMatrix effective_smatrix(const ScatterNetwork& net) {
    const auto part = detail::partition_network(net);
    const Eigen::Index ni = part.s_ii.rows();
    if (ni == 0) return UnitaryMatrix(part.s_ee);
    const ComplexMatrix a =
        ComplexMatrix::Identity(ni, ni) - part.s_ii * part.c;
    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    Eigen::VectorXd inv_sigma(ni);
    for (Eigen::Index i = 0; i < ni; ++i) {
        if (sigma(i) >= 1e-10) {
            inv_sigma(i) = 1.0 / sigma(i);
        } else {
            const double drive =
                (svd.matrixU().col(i).adjoint() * part.s_ie).cwiseAbs().maxCoeff();
            if (drive > 1e-10)
                throw std::domain_error(
                    "resonant internal loop: a unit-gain internal mode is driven from the "
                    "external ports, so no steady-state scattering solution exists");
            inv_sigma(i) = 0.0; // dark on-resonance mode: unreachable, projected out
        }
    }
    const ComplexMatrix x = svd.matrixV() * inv_sigma.asDiagonal() *
                            (svd.matrixU().adjoint() * part.s_ie);
    return UnitaryMatrix(part.s_ee + part.s_ei * (part.c * x));
}

// Truncated path sum S_EE + S_EI C (sum_{p=0}^{bounces} (S_II C)^p) S_IE;
// converges to effective_smatrix when the one-bounce spectral radius is < 1.
// Not unitary in general (finitely many paths).
inline ComplexMatrix path_sum_smatrix(const ScatterNetwork& net, int bounces) {
    if (bounces < 0) throw std::invalid_argument("bounce count must be non-negative");
    const auto part = detail::partition_network(net);
    if (part.s_ii.rows() == 0) return part.s_ee;
    const ComplexMatrix m = part.s_ii * part.c;
    ComplexMatrix term = part.s_ie;
    ComplexMatrix total = term;
    for (int p = 1; p <= bounces; ++p) {
        term = m * term;
        total += term;
    }
    return part.s_ee + part.s_ei * (part.c * total);
}

// Propagation/reflection conventions for the three-splitter ring. ring_phase
// is the per-traversal phase of a full splitter-to-splitter segment; the
// mirror stubs sit at half that distance. mirror_sign is the mirror's
// reflection sign; the phase plate in front of the mirror is crossed twice per
// reflection, so a vertex of plate phase phi reflects with
// mirror_sign * e^{2 i phi}.
struct CalibrationProfile {
    double ring_phase = 0.0;
    double mirror_sign = -1.0;
};

// Frozen by the calibration regression test: with ring_phase = 0 and
// mirror_sign = -1, vertex plates at -3pi/4 reproduce the three-port coin
// (-i/3)[[1,-2,-2],[-2,1,-2],[-2,-2,1]] up to a global phase.
inline constexpr CalibrationProfile kCalibratedThreePortProfile{};

// symmetric 50:50 splitter block, transmission 1/sqrt2, cross term i/sqrt2
inline ComplexMatrix splitter_2x2() {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix u(2, 2);
    u << Complex(s, 0.0), Complex(0.0, s), Complex(0.0, s), Complex(s, 0.0);
    return u;
}

// Three-splitter ring with mirror/phase-plate vertex units. Each splitter has
// four ports: x (external), m (to its vertex), l and r (ring, counterclockwise
// neighbors). The splitter couples {x, m} to {l, r} through the 50:50 block
// with no same-side reflection. Ring segments carry profile.ring_phase, vertex
// stubs half of it.
inline ScatterNetwork build_unbiased_three_port(const std::array<double, 3>& vertex_phases,
                                                const CalibrationProfile& profile = kCalibratedThreePortProfile) {
    ScatterNetwork net;
    const ComplexMatrix u = splitter_2x2();
    for (int j = 0; j < 3; ++j) {
        const std::string id = "bs" + std::to_string(j);
        ComplexMatrix s4 = ComplexMatrix::Zero(4, 4);
        s4.block(0, 2, 2, 2) = u;
        s4.block(2, 0, 2, 2) = u;
        net.nodes.push_back({id, s4, {id + ".x", id + ".m", id + ".l", id + ".r"}});
        const std::string vid = "v" + std::to_string(j);
        ComplexMatrix refl(1, 1);
        refl(0, 0) = profile.mirror_sign * std::polar(1.0, 2.0 * vertex_phases[static_cast<size_t>(j)]);
        net.nodes.push_back({vid, refl, {vid + ".p"}});
    }
    for (int j = 0; j < 3; ++j) {
        const std::string bs = "bs" + std::to_string(j);
        const std::string next = "bs" + std::to_string((j + 1) % 3);
        net.internal_edges.push_back({bs + ".r", next + ".l", profile.ring_phase});
        net.internal_edges.push_back({bs + ".m", "v" + std::to_string(j) + ".p", profile.ring_phase / 2.0});
    }
    net.external_ports = {"bs0.x", "bs1.x", "bs2.x"};
    return net;
}

// effective coin of the ring with all three vertex plates at the same phase
inline UnitaryMatrix unbiased_three_port_unitary(double vertex_phase,
                                                 const CalibrationProfile& profile = kCalibratedThreePortProfile) {
    return effective_smatrix(build_unbiased_three_port({vertex_phase, vertex_phase, vertex_phase}, profile));
}

} // namespace mplab
