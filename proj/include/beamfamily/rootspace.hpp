#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "beamfamily/core.hpp"

namespace beamfamily {

/// Largest supported array: the beam polynomial degree M-1 is capped at 64 so
/// that a flip mask fits in one 64-bit word.
inline constexpr int kMaxElements = 65;

/// Endpoints |w_1|, |w_M| below this fraction of ||w|| are treated as zero.
inline constexpr double kEndpointEpsilon = 1e-9;

/// Roots of w_1 + w_2 x + ... + w_M x^{M-1}, sorted by (|x|, arg x), and the
/// leading coefficient w_M in polar form.
struct RootFactorization {
    ArrayGeometry geometry;
    CVector roots;
    double leading_magnitude;
    double leading_phase;
};

/// Subset of root indices (0-based) whose roots are replaced by 1/conj(x).
class FlipMask {
public:
    FlipMask(std::uint64_t bits, int root_count);

    static FlipMask none(int root_count) { return {0, root_count}; }
    static FlipMask all(int root_count);
    /// Parses a bit string where character i is '1' if root i is flipped.
    static FlipMask parse(const std::string& bits);

    bool contains(int index) const { return (bits_ >> index) & 1U; }
    std::uint64_t bits() const noexcept { return bits_; }
    int root_count() const noexcept { return root_count_; }
    std::string to_string() const;

    friend bool operator==(const FlipMask&, const FlipMask&) = default;

private:
    std::uint64_t bits_;
    int root_count_;
};

/// All roots of the polynomial with ascending-power coefficients `coeffs`
/// (Aberth-Ehrlich iteration followed by Newton polishing).
CVector polynomial_roots(std::span<const cplx> coeffs);

/// Ascending-power coefficients of the monic polynomial prod (x - r_i).
CVector expand_monic(std::span<const cplx> roots);

RootFactorization factorize(const BeamVector& w);

/// Replaces each masked root x_i by 1/conj(x_i), rebuilds the weights with
/// leading magnitude |w_M| prod_{i in S} |x_i| and returns the canonical form.
BeamVector flip(const RootFactorization& fact, const FlipMask& mask);

/// Removes the global phase: the first component with magnitude above
/// 1e-9 ||w|| becomes real and positive.
BeamVector canonicalize(const BeamVector& w);

/// Number of roots with | |x| - 1 | <= tol.
int unit_circle_root_count(const RootFactorization& fact, double tol = 1e-8);

}  // namespace beamfamily
