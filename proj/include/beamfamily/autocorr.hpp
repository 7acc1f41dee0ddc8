#pragma once

#include <span>
#include <vector>

#include "beamfamily/core.hpp"

namespace beamfamily {

/// Lags r_k = sum_i w_i conj(w_{i+k}), k = 0..M-1. Negative lags follow from
/// r_{-k} = conj(r_k). Two beam vectors on the same array radiate the same
/// beampattern exactly when their sequences coincide.
struct AutocorrSequence {
    CVector lags;
};

AutocorrSequence autocorrelation(const BeamVector& w);

/// max_k |r^w_k - r^v_k|. Throws DomainError if the geometries differ.
double max_lag_deviation(const BeamVector& w, const BeamVector& v);

inline constexpr double kDefaultEquivalenceTol = 1e-9;

/// True iff max_k |r^w_k - r^v_k| <= rel_tol * ||w||^2.
bool same_beampattern(const BeamVector& w, const BeamVector& v,
                      double rel_tol = kDefaultEquivalenceTol);

/// w^H T w for the Hermitian Toeplitz matrix with first row `first_row`
/// (T_{mn} = first_row[n-m] for n >= m, conj otherwise), evaluated through
/// the autocorrelation lags only.
cplx toeplitz_quadratic_form(const AutocorrSequence& r, std::span<const cplx> first_row);

/// Angles whose phase factors exp(j 2 pi d sin(theta)) are 2M-1 distinct
/// points on the unit circle. For d >= 1/2 these are equally spaced.
std::vector<double> default_extraction_angles(const ArrayGeometry& geometry);

/// Builds Z = [z(theta_1) ... z(theta_{2M-1})], solves Z c = e_j and returns
/// max |sum_k c_k D(theta_k) - T(e_j)| with D(theta) = d(theta) d(theta)^H.
/// Diagonal j = 1 is the top-right corner, j = M the main diagonal.
/// Throws SingularSystem on coinciding phase factors or an ill-conditioned Z.
double toeplitz_extraction_check(const ArrayGeometry& geometry,
                                 std::span<const double> angles_deg, int j);

}  // namespace beamfamily
