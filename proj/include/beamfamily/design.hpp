#pragma once

#include <cstdint>
#include <vector>

#include "beamfamily/core.hpp"
#include "beamfamily/linalg.hpp"

namespace beamfamily {

struct AngleInterval {
    double lo_deg;
    double hi_deg;
};

/// Desired transmit phase phi(theta) = amplitude * sin(theta) + offset.
struct PhaseProfile {
    double amplitude = 2.0 * kPi;
    double offset = 0.0;

    double operator()(double theta_deg) const;
};

struct DesignSpec {
    ArrayGeometry geometry;
    AngleInterval sector;
    std::vector<AngleInterval> out_sector;
    double total_power;
    /// Worst acceptable out-of-sector response magnitude (linear).
    double delta;
    int insector_grid_count = 41;
    int outsector_grid_count = 180;
    PhaseProfile phase;
    int quadrature_points = 2048;

    /// Throws DomainError on overlapping sectors, out-of-range angles or
    /// non-positive power/delta/grid sizes.
    void validate() const;
};

/// Sector [-half_width, half_width] with a transition band of
/// `transition_deg` on each side; everything else is out-of-sector.
DesignSpec symmetric_sector_spec(ArrayGeometry geometry, double half_width_deg,
                                 double transition_deg, double total_power, double delta);

std::vector<double> insector_grid(const DesignSpec& spec);

/// `density` multiplies the out-of-sector point count (4 gives the
/// validation grid).
std::vector<double> outsector_grid(const DesignSpec& spec, int density = 1);

/// A = integral over the sector of a(theta) a(theta)^H dtheta (theta in
/// radians), composite trapezoid, made exactly Hermitian.
CMatrix sector_matrix(const DesignSpec& spec);

/// sqrt(P_t / 2) (u_1 + u_2) from the two dominant eigenvectors of the
/// sector matrix, each rotated so its largest entry is real positive.
BeamVector spheroidal_mother(const DesignSpec& spec);

/// max_i |w^H d(theta_i) - exp(-j phi_i)| over the in-sector grid.
double minimax_objective(const BeamVector& w, const DesignSpec& spec);

/// max_k |w^H d(theta_k)| over `angles`.
double max_response(const BeamVector& w, const std::vector<double>& angles);

struct ConvexOptions {
    int restarts = 8;
    std::uint64_t seed = 0;
    int max_newton_steps = 20000;
    double gap_tolerance = 1e-6;
};

struct ConvexDesign {
    BeamVector weights;
    double objective;
    /// max |w^H d(theta_k)| over the out-of-sector constraint grid.
    double max_sidelobe;
    std::vector<double> restart_objectives;
};

/// Minimises the worst in-sector deviation from the unit-modulus target
/// exp(-j phi_i) subject to |w^H d(theta_k)| <= delta out of sector. The
/// result is normalised to the constraint (not to total_power).
ConvexDesign convex_mother(const DesignSpec& spec, const ConvexOptions& options = {});

}  // namespace beamfamily
