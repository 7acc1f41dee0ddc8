#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "beamfamily/core.hpp"
#include "beamfamily/rootspace.hpp"

namespace beamfamily {

/// Full enumeration is refused above this array size unless sampling is requested.
inline constexpr int kMaxFullEnumerationElements = 24;

/// Canonical members closer than this fraction of ||w|| (elementwise) are merged.
inline constexpr double kDedupTolerance = 1e-6;

struct EnumerationOptions {
    /// Worker threads for flip evaluation; 0 means hardware concurrency.
    unsigned threads = 1;
    /// When set, evaluates this many random masks (plus the empty mask)
    /// instead of all 2^{M-1}.
    std::optional<std::uint64_t> sample_masks;
    std::uint64_t seed = 0;
};

/// Distinct beam vectors (modulo global phase) sharing the mother's beampattern.
struct Family {
    BeamVector mother;
    std::vector<BeamVector> members;
    /// One representative mask per member: the first mask, in binary counting
    /// order, that produced it.
    std::vector<FlipMask> masks;
    std::size_t distinct_count = 0;
};

Family enumerate_family(const BeamVector& w, const EnumerationOptions& options = {});

/// Same count as enumerate_family(w).distinct_count without building the Family.
std::size_t count_distinct(const BeamVector& w, const EnumerationOptions& options = {});

}  // namespace beamfamily
