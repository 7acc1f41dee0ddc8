#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "beamfamily/core.hpp"
#include "beamfamily/enumerate.hpp"

namespace beamfamily {

enum class UniformityMetric {
    /// max_m |p_m - P_t/M|
    MaxDeviation,
    /// mean_m (p_m - P_t/M)^2
    Variance,
};

/// Per-element transmit power of a set of beam vectors radiated together.
struct PowerProfile {
    std::vector<double> per_element;
    double uniformity;
    double total_power;
};

double uniformity(std::span<const double> per_element, double total_power,
                  UniformityMetric metric = UniformityMetric::MaxDeviation);

/// p_m = sum_j |w^(j)_m|^2 after scaling the set uniformly so that
/// sum_j ||w^(j)||^2 = total_power.
PowerProfile power_profile(std::span<const BeamVector> vectors, double total_power,
                           UniformityMetric metric = UniformityMetric::MaxDeviation);

/// The vectors scaled by the common factor used in power_profile.
std::vector<BeamVector> scale_to_power(std::span<const BeamVector> vectors, double total_power);

inline constexpr std::uint64_t kDefaultSelectionBudget = 10'000'000;

struct SelectionOptions {
    UniformityMetric metric = UniformityMetric::MaxDeviation;
    /// Exhaustive search is used when C(count, k) <= budget.
    std::uint64_t budget = kDefaultSelectionBudget;
    bool force_exhaustive = false;
};

struct Selection {
    /// Indices into family.members, ascending.
    std::vector<std::size_t> indices;
    /// Selected members scaled to the power budget.
    std::vector<BeamVector> vectors;
    PowerProfile profile;
    bool exhaustive;
};

/// Picks k distinct family members whose combined per-element power is
/// closest to flat.
Selection select_subset(const Family& family, std::size_t k, double total_power,
                        const SelectionOptions& options = {});

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace beamfamily
