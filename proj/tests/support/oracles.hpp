#pragma once

// Reference computations that take a different route from the library code:
// direct linear solves, explicit field sums and truncated series.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "poems/material_film.hpp"

namespace poems::test {

using cplx = std::complex<double>;

// Solves M x = b by Gaussian elimination with partial pivoting.
inline std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> M, std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        std::swap(M[col], M[piv]);
        std::swap(b[col], b[piv]);
        if (M[col][col] == 0.0) throw std::runtime_error("singular system");
        for (int r = col + 1; r < 3; ++r) {
            const double f = M[r][col] / M[col][col];
            for (int c = col; c < 3; ++c) M[r][c] -= f * M[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 3; ++c) s -= M[r][c] * x[c];
        x[r] = s / M[r][r];
    }
    return x;
}

// Thickness-mode boundary-value problem: u(z) = A sin(bz) + B cos(bz) with a
// uniform D field. Unknowns (A, B, D0) from stress-free faces and the applied
// voltage; returns u at the top face.
inline double bvp_surface_displacement(const MaterialParams& m, const FilmGeometry& g, double V0,
                                       double omega) {
    const double beta = omega / std::sqrt(m.c_D / m.rho);
    const double h = m.e33 / m.eps_S;
    const double L = g.L_T;
    const double s = std::sin(beta * L), c = std::cos(beta * L);
    // T(0) = 0:   c_D beta A            - h D0 = 0
    // T(L) = 0:   c_D beta (A c - B s)  - h D0 = 0
    // voltage:    -h (A s + B (c - 1))  + L D0 / eps = V0
    const auto x = solve3({{{m.c_D * beta, 0.0, -h},
                            {m.c_D * beta * c, -m.c_D * beta * s, -h},
                            {-h * s, -h * (c - 1.0), L / m.eps_S}}},
                          {0.0, 0.0, V0});
    return x[0] * s + x[1] * c;
}

// Michelson output from the two returning fields, no small-signal expansion.
inline double michelson_field_current(double alpha, double P0, double k0, double delta_L, double x,
                                      double phase_t, double phase_r1, double phase_r2) {
    // The common arm length drops out; leaving it at zero keeps the phases small
    // enough that rounding stays near 1e-15 of the full-fringe current.
    const cplx north = std::polar(1.0, 2.0 * k0 * (delta_L - x) - phase_r1 + phase_t);
    const cplx east = std::polar(1.0, -phase_r2 + phase_t);
    return alpha * P0 * std::norm(0.5 * (north + east));
}

// Arm reflectance as the sum over round trips: prompt reflection plus every
// leak-out after n further round trips, truncated once terms fall below tol.
inline cplx cavity_round_trip_sum(double r1, double t1, double r2, double length, double k0,
                                  double x, double tol = 1e-17) {
    const cplx p = std::polar(1.0, -2.0 * k0 * length) * std::polar(1.0, 2.0 * k0 * x);
    const cplx step = r1 * r2 * p;
    cplx term = t1 * t1 * r2 * p;
    cplx sum = 0.0;
    // Kahan-compensated accumulation keeps long sums honest near r1 r2 -> 1.
    cplx comp = 0.0;
    for (long n = 0; n < 100000000L; ++n) {
        const cplx y = term - comp;
        const cplx t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        term *= step;
        if (std::abs(term) < tol) break;
    }
    return r1 - sum;
}

}  // namespace poems::test
