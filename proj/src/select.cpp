#include "beamfamily/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "beamfamily/errors.hpp"

namespace beamfamily {

namespace {

/// Pair exchanges are attempted only while one pass stays within this many
/// multiples of the evaluation budget.
constexpr std::uint64_t kPairExchangeBudgetFactor = 100;

class SubsetScorer {
public:
    SubsetScorer(const Family& family, double total_power, UniformityMetric metric)
        : total_power_(total_power), metric_(metric) {
        for (const auto& v : family.members) {
            std::vector<double> p(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) p[i] = std::norm(v[i]);
            powers_.push_back(std::move(p));
        }
        elements_ = family.mother.size();
        scratch_.resize(elements_);
    }

    std::size_t member_count() const { return powers_.size(); }

    double score(std::span<const std::size_t> subset) {
        std::fill(scratch_.begin(), scratch_.end(), 0.0);
        for (std::size_t j : subset) {
            const auto& p = powers_[j];
            for (std::size_t i = 0; i < elements_; ++i) scratch_[i] += p[i];
        }
        const double sum = std::accumulate(scratch_.begin(), scratch_.end(), 0.0);
        for (auto& x : scratch_) x *= total_power_ / sum;
        return uniformity(scratch_, total_power_, metric_);
    }

private:
    std::vector<std::vector<double>> powers_;
    std::size_t elements_ = 0;
    double total_power_;
    UniformityMetric metric_;
    std::vector<double> scratch_;
};

std::vector<std::size_t> exhaustive_search(SubsetScorer& scorer, std::size_t k) {
    const std::size_t n = scorer.member_count();
    std::vector<std::size_t> current(k);
    std::iota(current.begin(), current.end(), 0);
    std::vector<std::size_t> best = current;
    double best_score = scorer.score(current);
    while (true) {
        // next combination in lexicographic order
        std::size_t i = k;
        while (i > 0 && current[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++current[i - 1];
        for (std::size_t j = i; j < k; ++j) current[j] = current[j - 1] + 1;
        const double s = scorer.score(current);
        if (s < best_score) {
            best_score = s;
            best = current;
        }
    }
    return best;
}

/// Greedy growth from a fixed seed by best marginal additions.
std::vector<std::size_t> grow(SubsetScorer& scorer, std::size_t k, std::size_t seed) {
    const std::size_t n = scorer.member_count();
    std::vector<std::size_t> subset{seed};
    std::vector<bool> used(n, false);
    used[seed] = true;
    while (subset.size() < k) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t pick = n;
        subset.push_back(0);
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            subset.back() = i;
            const double s = scorer.score(subset);
            if (s < best) {
                best = s;
                pick = i;
            }
        }
        subset.back() = pick;
        used[pick] = true;
    }
    return subset;
}

/// Steepest descent over single replacements, and optionally two-member
/// exchanges once single moves stall. Returns the final score.
double descend(SubsetScorer& scorer, std::vector<std::size_t>& subset, double improve_tol,
               bool pair_exchange) {
    const std::size_t n = scorer.member_count();
    const std::size_t k = subset.size();
    std::vector<bool> used(n, false);
    for (std::size_t i : subset) used[i] = true;
    double current = scorer.score(subset);
    while (true) {
        double best = current;
        std::size_t best_pos = k, best_new = n;
        std::vector<std::size_t> trial = subset;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t i = 0; i < n; ++i) {
                if (used[i]) continue;
                trial[a] = i;
                const double s = scorer.score(trial);
                if (s < best - improve_tol) {
                    best = s;
                    best_pos = a;
                    best_new = i;
                }
            }
            trial[a] = subset[a];
        }
        if (best_pos < k) {
            used[subset[best_pos]] = false;
            used[best_new] = true;
            subset[best_pos] = best_new;
            current = best;
            continue;
        }
        if (!pair_exchange || k < 2) break;

        std::size_t pa = k, pb = k, ni = n, nj = n;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                for (std::size_t i = 0; i < n; ++i) {
                    if (used[i]) continue;
                    trial[a] = i;
                    for (std::size_t j = i + 1; j < n; ++j) {
                        if (used[j]) continue;
                        trial[b] = j;
                        const double s = scorer.score(trial);
                        if (s < best - improve_tol) {
                            best = s;
                            pa = a;
                            pb = b;
                            ni = i;
                            nj = j;
                        }
                    }
                    trial[b] = subset[b];
                }
                trial[a] = subset[a];
            }
        }
        if (pa == k) break;
        used[subset[pa]] = false;
        used[subset[pb]] = false;
        used[ni] = true;
        used[nj] = true;
        subset[pa] = ni;
        subset[pb] = nj;
        current = best;
    }
    return current;
}

std::vector<std::size_t> heuristic_search(SubsetScorer& scorer, std::size_t k, double improve_tol,
                                          std::uint64_t budget) {
    const std::size_t n = scorer.member_count();
    const std::uint64_t allowance = kPairExchangeBudgetFactor * budget;

    // Seeds: the best single member always; every member when one
    // greedy-plus-swap run per seed is affordable.
    std::size_t best_single = 0;
    {
        double best = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> one(1);
        for (std::size_t i = 0; i < n; ++i) {
            one[0] = i;
            const double s = scorer.score(one);
            if (s < best) {
                best = s;
                best_single = i;
            }
        }
    }
    std::vector<std::size_t> seeds{best_single};
    const std::uint64_t per_start = static_cast<std::uint64_t>(n) * k * 4;
    if (per_start <= allowance / std::max<std::size_t>(n, 1)) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i != best_single) seeds.push_back(i);
        }
    }

    const bool pair_exchange = k >= 2 && binomial(n - k, 2) <= allowance / binomial(k, 2);
    // pair moves inside every start only when that is cheap too (~4 passes each)
    const bool pair_every_start =
        pair_exchange && seeds.size() > 1 &&
        binomial(n - k, 2) * binomial(k, 2) <= allowance / (4 * seeds.size());

    std::vector<std::size_t> subset;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t seed : seeds) {
        auto candidate = grow(scorer, k, seed);
        const double s = descend(scorer, candidate, improve_tol, pair_every_start);
        if (s < best - improve_tol) {
            best = s;
            subset = std::move(candidate);
        }
    }
    if (pair_exchange && !pair_every_start) descend(scorer, subset, improve_tol, true);
    std::sort(subset.begin(), subset.end());
    return subset;
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t factor = n - k + i;
        if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        // exact: result * factor is divisible by i
        result = result * factor / i;
    }
    return result;
}

double uniformity(std::span<const double> per_element, double total_power, UniformityMetric metric) {
    const double flat = total_power / static_cast<double>(per_element.size());
    double acc = 0.0;
    for (double p : per_element) {
        const double dev = p - flat;
        if (metric == UniformityMetric::MaxDeviation) {
            acc = std::max(acc, std::abs(dev));
        } else {
            acc += dev * dev;
        }
    }
    return metric == UniformityMetric::Variance ? acc / static_cast<double>(per_element.size()) : acc;
}

std::vector<BeamVector> scale_to_power(std::span<const BeamVector> vectors, double total_power) {
    if (vectors.empty()) throw DomainError("cannot scale an empty set of beam vectors");
    if (!(total_power > 0.0)) throw DomainError("total power must be positive");
    double energy = 0.0;
    for (const auto& v : vectors) {
        if (v.geometry() != vectors[0].geometry()) {
            throw DomainError("beam vectors are defined on different arrays");
        }
        energy += v.norm_squared();
    }
    if (!(energy > 0.0)) throw DomainError("beam vector set has zero energy");
    const double factor = std::sqrt(total_power / energy);
    std::vector<BeamVector> out;
    for (const auto& v : vectors) out.push_back(v.scaled(factor));
    return out;
}

PowerProfile power_profile(std::span<const BeamVector> vectors, double total_power,
                           UniformityMetric metric) {
    const auto scaled = scale_to_power(vectors, total_power);
    std::vector<double> p(scaled[0].size(), 0.0);
    for (const auto& v : scaled) {
        for (std::size_t i = 0; i < v.size(); ++i) p[i] += std::norm(v[i]);
    }
    const double u = uniformity(p, total_power, metric);
    return PowerProfile{std::move(p), u, total_power};
}

Selection select_subset(const Family& family, std::size_t k, double total_power,
                        const SelectionOptions& options) {
    if (k < 1 || k > family.members.size()) {
        throw DomainError("subset size " + std::to_string(k) + " outside [1, " +
                          std::to_string(family.members.size()) + "]");
    }
    if (!(total_power > 0.0)) throw DomainError("total power must be positive");
    if (options.budget == 0) throw DomainError("selection budget must be positive");

    SubsetScorer scorer(family, total_power, options.metric);
    const bool exhaustive =
        options.force_exhaustive || binomial(family.members.size(), k) <= options.budget;
    const double improve_tol = 1e-12 * total_power;
    std::vector<std::size_t> indices =
        exhaustive ? exhaustive_search(scorer, k)
                   : heuristic_search(scorer, k, improve_tol, options.budget);

    std::vector<BeamVector> chosen;
    for (std::size_t i : indices) chosen.push_back(family.members[i]);
    auto profile = power_profile(chosen, total_power, options.metric);
    auto scaled = scale_to_power(chosen, total_power);
    return Selection{std::move(indices), std::move(scaled), std::move(profile), exhaustive};
}

}  // namespace beamfamily
