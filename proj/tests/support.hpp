#pragma once

// Shared generators, reference data and independent oracles for the tests.
// Nothing here calls into the code paths it is used to check.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "beamfamily/core.hpp"

namespace beamfamily::testing {

/// Mother spheroidal vector, first column of the published design table
/// (M = 10, d = 0.5, sector [-10, 10] deg, P_t = 10).
inline constexpr std::array<double, 10> kTableMother = {
    0.5178, 0.3408, 0.0472, -0.3263, -0.7253, -1.0873, -1.3540, -1.4830, -1.4562, -1.2828};

/// Fifth column of the same table (one of the four selected vectors).
inline constexpr std::array<double, 10> kTableColumn5 = {
    0.6414, 0.7281, 0.7415, 0.6770, 0.5437, 0.3627, 0.1632, -0.0236, -0.1704, -0.2589};

inline BeamVector random_beam(std::mt19937_64& rng, int m, double spacing = 0.5) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector w(static_cast<std::size_t>(m));
    for (auto& x : w) x = cplx{normal(rng), normal(rng)};
    return BeamVector(ArrayGeometry(m, spacing), std::move(w));
}

/// Random vector whose endpoints are safely away from zero.
inline BeamVector random_generic_beam(std::mt19937_64& rng, int m, double spacing = 0.5) {
    while (true) {
        BeamVector w = random_beam(rng, m, spacing);
        const double n = w.norm();
        if (std::abs(w[0]) > 0.05 * n && std::abs(w[w.size() - 1]) > 0.05 * n) return w;
    }
}

/// Polynomial coefficients (ascending) of lead * prod (x - r_i), by naive
/// convolution in the given order.
inline CVector poly_from_roots(const CVector& roots, cplx lead) {
    CVector c{lead};
    for (const auto& r : roots) {
        CVector next(c.size() + 1, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

/// Roots via eigenvalues of the companion matrix.
inline CVector companion_roots(const CVector& ascending) {
    const int n = static_cast<int>(ascending.size()) - 1;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -ascending[static_cast<std::size_t>(i)] / ascending.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp);
    CVector roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return roots;
}

/// |w^H conj(a(theta))|^2 summed term by term.
inline double naive_power(const BeamVector& w, double theta_deg) {
    const double u = std::sin(theta_deg * kPi / 180.0);
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < w.size(); ++m) {
        const double phase = -2.0 * kPi * w.geometry().spacing() * static_cast<double>(m) * u;
        acc += std::conj(w[m]) * cplx{std::cos(phase), std::sin(phase)};
    }
    return std::norm(acc);
}

inline double max_abs_diff(const CVector& a, const CVector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

/// Removes the global phase using the first entry above 1e-9 * norm.
inline CVector phase_normalised(const CVector& v) {
    double n = 0.0;
    for (const auto& x : v) n += std::norm(x);
    n = std::sqrt(n);
    std::size_t i = 0;
    while (std::abs(v[i]) <= 1e-9 * n) ++i;
    const cplx ph = std::abs(v[i]) / v[i];
    CVector out(v);
    for (auto& x : out) x *= ph;
    return out;
}

/// Pairwise dedup of phase-normalised vectors; returns the class count.
inline std::size_t brute_force_distinct(const std::vector<CVector>& vs, double tol) {
    std::vector<CVector> kept;
    for (const auto& v : vs) {
        bool dup = false;
        for (const auto& k : kept) {
            if (max_abs_diff(v, k) <= tol) {
                dup = true;
                break;
            }
        }
        if (!dup) kept.push_back(v);
    }
    return kept.size();
}

/// All 2^{M-1} flip images of w via companion-matrix roots and naive
/// reconstruction, phase-normalised.
inline std::vector<CVector> brute_force_family(const BeamVector& w) {
    const CVector roots = companion_roots(w.weights());
    const std::size_t n = roots.size();
    std::vector<CVector> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        CVector r(roots);
        double scale = std::abs(w[w.size() - 1]);
        for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1U) {
                scale *= std::abs(r[i]);
                r[i] = 1.0 / std::conj(r[i]);
            }
        }
        out.push_back(phase_normalised(poly_from_roots(r, scale)));
    }
    return out;
}

/// Beam vector whose polynomial has `on_circle` roots on the unit circle and
/// the rest strictly inside or outside it.
inline BeamVector beam_with_unit_roots(std::mt19937_64& rng, int m, int on_circle) {
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> radius(0.3, 0.7);
    std::bernoulli_distribution outside(0.5);
    CVector roots;
    for (int i = 0; i < m - 1; ++i) {
        if (i < on_circle) {
            roots.push_back(std::polar(1.0, angle(rng)));
        } else {
            const double r = radius(rng);
            roots.push_back(std::polar(outside(rng) ? 1.0 / r : r, angle(rng)));
        }
    }
    return BeamVector(ArrayGeometry(m, 0.5), poly_from_roots(roots, cplx{0.8, 0.3}));
}

}  // namespace beamfamily::testing
