#include "beamfamily/autocorr.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "beamfamily/errors.hpp"

namespace beamfamily {

namespace {

constexpr double kPhaseCollisionTol = 1e-9;
constexpr double kMinReciprocalCondition = 1e-12;

void check_same_geometry(const BeamVector& w, const BeamVector& v) {
    if (w.geometry() != v.geometry()) {
        throw DomainError("beam vectors are defined on different arrays");
    }
}

}  // namespace

AutocorrSequence autocorrelation(const BeamVector& w) {
    const std::size_t m = w.size();
    AutocorrSequence r{CVector(m, cplx{0.0, 0.0})};
    for (std::size_t k = 0; k < m; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i + k < m; ++i) acc += w[i] * std::conj(w[i + k]);
        r.lags[k] = acc;
    }
    r.lags[0] = r.lags[0].real();
    return r;
}

double max_lag_deviation(const BeamVector& w, const BeamVector& v) {
    check_same_geometry(w, v);
    const auto rw = autocorrelation(w);
    const auto rv = autocorrelation(v);
    double dev = 0.0;
    for (std::size_t k = 0; k < rw.lags.size(); ++k) {
        dev = std::max(dev, std::abs(rw.lags[k] - rv.lags[k]));
    }
    return dev;
}

bool same_beampattern(const BeamVector& w, const BeamVector& v, double rel_tol) {
    if (!(rel_tol > 0.0)) throw DomainError("equivalence tolerance must be positive");
    return max_lag_deviation(w, v) <= rel_tol * w.norm_squared();
}

cplx toeplitz_quadratic_form(const AutocorrSequence& r, std::span<const cplx> first_row) {
    if (first_row.size() != r.lags.size()) {
        throw DomainError("Toeplitz first row length must equal the number of lags");
    }
    cplx acc = first_row[0] * r.lags[0];
    for (std::size_t k = 1; k < r.lags.size(); ++k) {
        acc += first_row[k] * std::conj(r.lags[k]) + std::conj(first_row[k]) * r.lags[k];
    }
    return acc;
}

std::vector<double> default_extraction_angles(const ArrayGeometry& geometry) {
    const int m = geometry.element_count();
    const int count = 2 * m - 1;
    const double d = geometry.spacing();
    std::vector<double> angles(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        double s;
        if (d >= 0.5) {
            // phases -pi + 2 pi k / (2M-1): the rotated (2M-1)-th roots of unity
            const double phase = -kPi + 2.0 * kPi * k / count;
            s = phase / (2.0 * kPi * d);
        } else {
            s = -1.0 + 2.0 * k / (count - 1);
        }
        angles[static_cast<std::size_t>(k)] = std::asin(std::clamp(s, -1.0, 1.0)) * 180.0 / kPi;
    }
    return angles;
}

double toeplitz_extraction_check(const ArrayGeometry& geometry,
                                 std::span<const double> angles_deg, int j) {
    const int m = geometry.element_count();
    const int count = 2 * m - 1;
    if (static_cast<int>(angles_deg.size()) != count) {
        throw DomainError("extraction check needs exactly 2M-1 = " + std::to_string(count) +
                          " angles");
    }
    if (j < 1 || j > count) {
        throw DomainError("diagonal index must lie in [1, 2M-1]");
    }

    std::vector<double> psi(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double theta = angles_deg[static_cast<std::size_t>(k)];
        if (!(theta >= -90.0 && theta <= 90.0)) throw DomainError("angle outside [-90, 90]");
        psi[static_cast<std::size_t>(k)] =
            2.0 * kPi * geometry.spacing() * std::sin(theta * kPi / 180.0);
    }
    for (int a = 0; a < count; ++a) {
        for (int b = a + 1; b < count; ++b) {
            const cplx ua = std::polar(1.0, psi[static_cast<std::size_t>(a)]);
            const cplx ub = std::polar(1.0, psi[static_cast<std::size_t>(b)]);
            if (std::abs(ua - ub) <= kPhaseCollisionTol) {
                std::ostringstream msg;
                msg << "angles " << angles_deg[static_cast<std::size_t>(a)] << " and "
                    << angles_deg[static_cast<std::size_t>(b)]
                    << " deg give the same phase factor; Z is singular";
                throw SingularSystem(msg.str());
            }
        }
    }

    // z_i(theta) holds the i-th diagonal of D(theta), offset n - m = M - i.
    Eigen::MatrixXcd z(count, count);
    for (int i = 0; i < count; ++i) {
        for (int k = 0; k < count; ++k) {
            z(i, k) = std::polar(1.0, psi[static_cast<std::size_t>(k)] * (m - 1 - i));
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(z);
    if (lu.rcond() < kMinReciprocalCondition) {
        std::ostringstream msg;
        msg << "Vandermonde system is ill-conditioned (rcond " << lu.rcond() << ")";
        throw SingularSystem(msg.str());
    }
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(count);
    e(j - 1) = 1.0;
    const Eigen::VectorXcd c = lu.solve(e);

    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(m, m);
    for (int k = 0; k < count; ++k) {
        const CVector a = steering(geometry, angles_deg[static_cast<std::size_t>(k)]);
        for (int r = 0; r < m; ++r) {
            for (int col = 0; col < m; ++col) {
                s(r, col) += c(k) * std::conj(a[static_cast<std::size_t>(r)]) *
                             a[static_cast<std::size_t>(col)];
            }
        }
    }
    const int target_offset = m - j;
    double residual = 0.0;
    for (int r = 0; r < m; ++r) {
        for (int col = 0; col < m; ++col) {
            const double expected = (col - r == target_offset) ? 1.0 : 0.0;
            residual = std::max(residual, std::abs(s(r, col) - expected));
        }
    }
    return residual;
}

}  // namespace beamfamily
