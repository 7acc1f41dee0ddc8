#include "beamfamily/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>

#include "beamfamily/errors.hpp"

namespace beamfamily {

namespace {

constexpr std::uint64_t kChunkSize = 1U << 14;

/// Canonical vectors bucketed by the (real, positive) first component so
/// that near-duplicates are found by a range query.
class DedupIndex {
public:
    explicit DedupIndex(double tol) : tol_(tol) {}

    /// Returns true if `v` was new and has been stored.
    bool insert(const CVector& v) {
        const double key = v[0].real();
        const auto lo = by_key_.lower_bound(key - tol_);
        const auto hi = by_key_.upper_bound(key + tol_);
        for (auto it = lo; it != hi; ++it) {
            if (close(stored_[it->second], v)) return false;
        }
        by_key_.emplace(key, stored_.size());
        stored_.push_back(v);
        return true;
    }

    std::size_t size() const { return stored_.size(); }

private:
    bool close(const CVector& a, const CVector& b) const {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (std::abs(a[i] - b[i]) > tol_) return false;
        }
        return true;
    }

    double tol_;
    std::multimap<double, std::size_t> by_key_;
    std::vector<CVector> stored_;
};

std::vector<std::uint64_t> mask_schedule(int root_count, const EnumerationOptions& options) {
    std::vector<std::uint64_t> masks;
    if (options.sample_masks) {
        std::mt19937_64 rng(options.seed);
        const std::uint64_t limit =
            root_count == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << root_count) - 1;
        std::uniform_int_distribution<std::uint64_t> dist(0, limit);
        masks.reserve(*options.sample_masks + 1);
        masks.push_back(0);
        for (std::uint64_t i = 0; i < *options.sample_masks; ++i) masks.push_back(dist(rng));
        return masks;
    }
    const std::uint64_t total = std::uint64_t{1} << root_count;
    masks.resize(total);
    for (std::uint64_t i = 0; i < total; ++i) masks[i] = i;
    return masks;
}

/// Evaluates flips for masks[begin, end) on a pool of threads; the output
/// order matches the mask order regardless of the thread count.
std::vector<BeamVector> evaluate_chunk(const RootFactorization& fact,
                                       const std::vector<std::uint64_t>& masks, std::size_t begin,
                                       std::size_t end, unsigned threads) {
    const int n = static_cast<int>(fact.roots.size());
    std::vector<std::optional<BeamVector>> slots(end - begin);
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) slots[i - begin] = flip(fact, FlipMask(masks[i], n));
    };
    const std::size_t count = end - begin;
    const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (workers == 1) {
        work(begin, end);
    } else {
        std::vector<std::thread> pool;
        const std::size_t step = (count + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t lo = begin + t * step;
            const std::size_t hi = std::min(end, lo + step);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    std::vector<BeamVector> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

template <typename OnNew>
void run_enumeration(const BeamVector& w, const EnumerationOptions& options, OnNew&& on_new) {
    const int m = w.geometry().element_count();
    if (m > kMaxFullEnumerationElements && !options.sample_masks) {
        throw FamilyTooLarge("a " + std::to_string(m) + "-element array has 2^" +
                             std::to_string(m - 1) +
                             " flip masks; full enumeration is limited to M <= " +
                             std::to_string(kMaxFullEnumerationElements) +
                             ", request random sampling instead");
    }
    const RootFactorization fact = factorize(w);
    const std::vector<std::uint64_t> masks = mask_schedule(m - 1, options);
    const unsigned threads =
        options.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.threads;

    DedupIndex index(kDedupTolerance * w.norm());
    for (std::size_t begin = 0; begin < masks.size(); begin += kChunkSize) {
        const std::size_t end = std::min<std::size_t>(masks.size(), begin + kChunkSize);
        auto chunk = evaluate_chunk(fact, masks, begin, end, threads);
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            if (index.insert(chunk[i].weights())) {
                on_new(std::move(chunk[i]), FlipMask(masks[begin + i], m - 1));
            }
        }
    }
}

}  // namespace

Family enumerate_family(const BeamVector& w, const EnumerationOptions& options) {
    Family family{w, {}, {}, 0};
    run_enumeration(w, options, [&](BeamVector v, FlipMask mask) {
        family.members.push_back(std::move(v));
        family.masks.push_back(mask);
    });
    family.distinct_count = family.members.size();
    return family;
}

std::size_t count_distinct(const BeamVector& w, const EnumerationOptions& options) {
    std::size_t count = 0;
    run_enumeration(w, options, [&](BeamVector, FlipMask) { ++count; });
    return count;
}

}  // namespace beamfamily
