#include "beamfamily/core.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "beamfamily/errors.hpp"

namespace beamfamily {

namespace {

void check_angle(double theta_deg) {
    if (!(theta_deg >= -90.0 && theta_deg <= 90.0)) {
        throw DomainError("angle " + std::to_string(theta_deg) + " deg outside [-90, 90]");
    }
}

}  // namespace

ArrayGeometry::ArrayGeometry(int element_count, double spacing)
    : element_count_(element_count), spacing_(spacing) {
    if (element_count < 2) {
        throw DomainError("array needs at least 2 elements, got " + std::to_string(element_count));
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw DomainError("element spacing must be positive and finite");
    }
}

BeamVector::BeamVector(ArrayGeometry geometry, CVector weights)
    : geometry_(geometry), weights_(std::move(weights)) {
    if (weights_.size() != static_cast<std::size_t>(geometry_.element_count())) {
        throw DomainError("beam vector has " + std::to_string(weights_.size()) +
                          " weights but the array has " +
                          std::to_string(geometry_.element_count()) + " elements");
    }
    for (const auto& x : weights_) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
            throw DomainError("beam vector contains a non-finite weight");
        }
    }
}

double BeamVector::norm_squared() const {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0,
                           [](double acc, const cplx& x) { return acc + std::norm(x); });
}

double BeamVector::norm() const { return std::sqrt(norm_squared()); }

BeamVector BeamVector::scaled(cplx factor) const {
    CVector out(weights_);
    for (auto& x : out) x *= factor;
    return BeamVector(geometry_, std::move(out));
}

BeamVector BeamVector::reverse_conj() const {
    CVector out(weights_.rbegin(), weights_.rend());
    for (auto& x : out) x = std::conj(x);
    return BeamVector(geometry_, std::move(out));
}

CVector steering(const ArrayGeometry& geometry, double theta_deg) {
    check_angle(theta_deg);
    const double u = 2.0 * kPi * geometry.spacing() * std::sin(theta_deg * kPi / 180.0);
    CVector a(static_cast<std::size_t>(geometry.element_count()));
    a[0] = 1.0;
    for (std::size_t m = 1; m < a.size(); ++m) {
        a[m] = std::polar(1.0, u * static_cast<double>(m));
    }
    return a;
}

cplx response(const BeamVector& w, double theta_deg) {
    const CVector a = steering(w.geometry(), theta_deg);
    // w^H conj(a) = conj(sum_m w_m a_m)
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < a.size(); ++m) acc += w[m] * a[m];
    return std::conj(acc);
}

PatternGrid beampattern(const BeamVector& w, std::span<const double> angles) {
    if (angles.empty()) throw DomainError("beampattern needs at least one angle");
    PatternGrid grid;
    grid.angles.assign(angles.begin(), angles.end());
    grid.powers.reserve(angles.size());
    for (double theta : angles) grid.powers.push_back(std::norm(response(w, theta)));
    return grid;
}

double to_db(double p) {
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(p);
}

std::vector<double> angle_grid(double start_deg, double stop_deg, double step_deg) {
    if (!(step_deg > 0.0) || !(stop_deg >= start_deg)) {
        throw DomainError("empty angle grid");
    }
    check_angle(start_deg);
    check_angle(stop_deg);
    const auto n = static_cast<std::size_t>(std::floor((stop_deg - start_deg) / step_deg + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::min(stop_deg, start_deg + static_cast<double>(i) * step_deg);
    }
    return out;
}

std::vector<double> default_grid() { return angle_grid(-90.0, 90.0, 0.25); }

}  // namespace beamfamily
