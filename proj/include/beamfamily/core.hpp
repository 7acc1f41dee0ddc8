#pragma once

#include <complex>
#include <span>
#include <vector>

namespace beamfamily {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

/// Uniform linear array: element count and spacing in wavelengths.
class ArrayGeometry {
public:
    ArrayGeometry(int element_count, double spacing);

    int element_count() const noexcept { return element_count_; }
    double spacing() const noexcept { return spacing_; }

    friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;

private:
    int element_count_;
    double spacing_;
};

/// Complex weights of a transmit beamformer on a given array.
class BeamVector {
public:
    BeamVector(ArrayGeometry geometry, CVector weights);

    const ArrayGeometry& geometry() const noexcept { return geometry_; }
    const CVector& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }
    const cplx& operator[](std::size_t i) const { return weights_[i]; }

    double norm() const;
    double norm_squared() const;

    BeamVector scaled(cplx factor) const;
    /// reverse(conj(w)), which has the same beampattern as w.
    BeamVector reverse_conj() const;

private:
    ArrayGeometry geometry_;
    CVector weights_;
};

/// Sampled beampattern in linear power.
struct PatternGrid {
    std::vector<double> angles;
    std::vector<double> powers;
};

/// a(theta), element m has phase 2*pi*d*m*sin(theta), m = 0..M-1.
CVector steering(const ArrayGeometry& geometry, double theta_deg);

/// Complex array response w^H d(theta) with d = conj(a). |response|^2 is the
/// beampattern.
cplx response(const BeamVector& w, double theta_deg);

PatternGrid beampattern(const BeamVector& w, std::span<const double> angles);

/// 10 log10(p); returns -infinity for p <= 0.
double to_db(double p);

/// Uniform grid from start to stop inclusive. Throws DomainError if the grid
/// would be empty or leaves [-90, 90].
std::vector<double> angle_grid(double start_deg, double stop_deg, double step_deg);

/// [-90, 90] in 0.25 degree steps (721 points).
std::vector<double> default_grid();

}  // namespace beamfamily
