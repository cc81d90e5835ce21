#pragma once

// Pauli and Gell-Mann basis machinery: decomposition of 2x2 and 3x3 Hermitian
// operators into real coefficient vectors via trace inner products, and exact
// reconstruction. The eight Gell-Mann generators used here are the standard
// Hermitian set (tr(L_i L_j) = 2 delta_ij).

#include "core.hpp"
#include "format.hpp"

#include <array>
#include <utility>
#include <vector>

namespace mplab {

struct PauliCoefficients {
    double d0 = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double dz = 0.0;
};

struct GellMannCoefficients {
    double d0 = 0.0;
    std::array<double, 8> d{}; // d[j-1] multiplies generator j
};

// sigma_1, sigma_2, sigma_3
inline ComplexMatrix pauli(int a) {
    const Complex i(0.0, 1.0);
    ComplexMatrix m(2, 2);
    switch (a) {
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, -i, i, 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("pauli index must be 1..3");
    }
    return m;
}

// Standard Hermitian Gell-Mann generators. Generator 7 is the standard
// Hermitian form [[0,0,0],[0,0,-i],[0,i,0]].
inline ComplexMatrix gell_mann(int j) {
    const Complex i(0.0, 1.0);
    const double r3 = 1.0 / std::sqrt(3.0);
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    switch (j) {
        case 1: m(0, 1) = 1; m(1, 0) = 1; break;
        case 2: m(0, 1) = -i; m(1, 0) = i; break;
        case 3: m(0, 0) = 1; m(1, 1) = -1; break;
        case 4: m(0, 2) = 1; m(2, 0) = 1; break;
        case 5: m(0, 2) = -i; m(2, 0) = i; break;
        case 6: m(1, 2) = 1; m(2, 1) = 1; break;
        case 7: m(1, 2) = -i; m(2, 1) = i; break;
        case 8: m(0, 0) = r3; m(1, 1) = r3; m(2, 2) = -2.0 * r3; break;
        default: throw std::invalid_argument("gell_mann index must be 1..8");
    }
    return m;
}

// H = d0 I + sum_j d_j L_j with d0 = tr(H)/3 and d_j = tr(H L_j)/2
// (orthogonality tr(L_i L_j) = 2 delta_ij). Requires Hermitian input; all
// coefficients are then real.
inline GellMannCoefficients su3_decompose(const ComplexMatrix& h, double tolerance = kDefaultTolerance) {
    if (h.rows() != 3 || h.cols() != 3)
        throw std::invalid_argument("su3_decompose requires a 3x3 matrix");
    if (hermiticity_residual(h) > tolerance)
        throw std::invalid_argument("su3_decompose requires a Hermitian matrix");
    GellMannCoefficients c;
    c.d0 = h.trace().real() / 3.0;
    for (int j = 1; j <= 8; ++j)
        c.d[static_cast<size_t>(j - 1)] = (h * gell_mann(j)).trace().real() / 2.0;
    return c;
}

inline ComplexMatrix su3_reconstruct(const GellMannCoefficients& c) {
    ComplexMatrix h = c.d0 * ComplexMatrix::Identity(3, 3);
    for (int j = 1; j <= 8; ++j)
        h += c.d[static_cast<size_t>(j - 1)] * gell_mann(j);
    return h;
}

inline PauliCoefficients su2_decompose(const ComplexMatrix& h, double tolerance = kDefaultTolerance) {
    if (h.rows() != 2 || h.cols() != 2)
        throw std::invalid_argument("su2_decompose requires a 2x2 matrix");
    if (hermiticity_residual(h) > tolerance)
        throw std::invalid_argument("su2_decompose requires a Hermitian matrix");
    PauliCoefficients c;
    c.d0 = h.trace().real() / 2.0;
    c.dx = (h * pauli(1)).trace().real() / 2.0;
    c.dy = (h * pauli(2)).trace().real() / 2.0;
    c.dz = (h * pauli(3)).trace().real() / 2.0;
    return c;
}

inline ComplexMatrix su2_reconstruct(const PauliCoefficients& c) {
    return c.d0 * ComplexMatrix::Identity(2, 2) + c.dx * pauli(1) + c.dy * pauli(2) + c.dz * pauli(3);
}

// JSON export for a sampled coefficient table: an array of records
// {"k": ..., "d0": ..., "d1": ..., ..., "d8": ...}.
inline std::string coefficients_to_json(const std::vector<std::pair<double, GellMannCoefficients>>& rows) {
    JsonWriter w;
    w.begin_array();
    for (const auto& [k, c] : rows) {
        w.begin_object();
        w.key("k");
        w.value(k);
        w.key("d0");
        w.value(c.d0);
        for (int j = 1; j <= 8; ++j) {
            char name[4] = {'d', static_cast<char>('0' + j), '\0', '\0'};
            w.key(name);
            w.value(c.d[static_cast<size_t>(j - 1)]);
        }
        w.end_object();
    }
    w.end_array();
    return w.str();
}

} // namespace mplab
