#include <doctest.h>

#include <random>

#include "beamfamily/autocorr.hpp"
#include "beamfamily/enumerate.hpp"
#include "beamfamily/errors.hpp"
#include "support.hpp"

using namespace beamfamily;
using namespace beamfamily::testing;

namespace {

BeamVector beam(const CVector& w) {
    return BeamVector(ArrayGeometry(static_cast<int>(w.size()), 0.5), w);
}

bool same_member_set(const Family& a, const Family& b, double tol) {
    if (a.members.size() != b.members.size()) return false;
    for (const auto& x : a.members) {
        bool found = false;
        for (const auto& y : b.members) {
            if (max_abs_diff(x.weights(), y.weights()) <= tol) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("small families") {
    const auto fam = enumerate_family(beam({1.0, 2.0}));
    REQUIRE(fam.distinct_count == 2);
    CHECK(max_abs_diff(fam.members[0].weights(), CVector{1.0, 2.0}) < 1e-12);
    CHECK(max_abs_diff(fam.members[1].weights(), CVector{2.0, 1.0}) < 1e-12);
    CHECK(fam.masks[0].to_string() == "0");
    CHECK(fam.masks[1].to_string() == "1");

    // double root on the unit circle: every flip is a fixed point
    CHECK(enumerate_family(beam({1.0, 2.0, 1.0})).distinct_count == 1);

    const CVector on_circle = poly_from_roots({std::polar(1.0, 0.3), std::polar(1.0, 2.0),
                                               std::polar(1.0, -1.1), std::polar(1.0, 2.9)},
                                              1.0);
    CHECK(count_distinct(beam(on_circle)) == 1);
    CHECK(count_distinct(beam({1.0, cplx{0.3, -2.0}})) == 2);
}

TEST_CASE("generic vectors reach the full count") {
    std::mt19937_64 rng(31);
    CHECK(count_distinct(random_generic_beam(rng, 5)) == 16);
    const auto fam = enumerate_family(random_generic_beam(rng, 10));
    CHECK(fam.distinct_count == 512);
    for (const auto& v : fam.members) CHECK(same_beampattern(fam.mother, v));
    CHECK(max_abs_diff(fam.members[0].weights(), canonicalize(fam.mother).weights()) < 1e-10 * fam.mother.norm());
}

TEST_CASE("count matches brute force with roots on the unit circle") {
    std::mt19937_64 rng(32);
    for (int m = 2; m <= 8; ++m) {
        for (int r = 0; r < m; ++r) {
            const auto w = beam_with_unit_roots(rng, m, r);
            const auto oracle = brute_force_distinct(brute_force_family(w), kDedupTolerance * w.norm());
            const auto count = count_distinct(w);
            CHECK(oracle == (std::size_t{1} << (m - 1 - r)));
            CHECK(count == oracle);
        }
    }
}

TEST_CASE("family invariants") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 3 + trial % 6;
        const auto w = random_generic_beam(rng, m);
        const auto fam = enumerate_family(w);
        CHECK(fam.distinct_count <= (std::size_t{1} << (m - 1)));
        CHECK(fam.members.size() == fam.masks.size());
        const auto r0 = autocorrelation(w);
        for (std::size_t i = 0; i < fam.members.size(); ++i) {
            CHECK(same_beampattern(w, fam.members[i]));
            CHECK(std::abs(fam.members[i].norm() - w.norm()) <= 1e-10 * w.norm());
            for (std::size_t j = 0; j < i; ++j) {
                CHECK(max_abs_diff(fam.members[i].weights(), fam.members[j].weights()) >
                      kDedupTolerance * w.norm());
            }
        }
        // closure: enumerating from any member gives the same set
        std::uniform_int_distribution<std::size_t> pick(0, fam.members.size() - 1);
        const auto again = enumerate_family(fam.members[pick(rng)]);
        CHECK(same_member_set(fam, again, 1e-6 * w.norm()));
    }
}

TEST_CASE("thread count does not change the result") {
    std::mt19937_64 rng(34);
    const auto w = random_generic_beam(rng, 9);
    EnumerationOptions one, four;
    four.threads = 4;
    const auto a = enumerate_family(w, one);
    const auto b = enumerate_family(w, four);
    REQUIRE(a.distinct_count == b.distinct_count);
    for (std::size_t i = 0; i < a.members.size(); ++i) {
        CHECK(a.members[i].weights() == b.members[i].weights());
        CHECK(a.masks[i] == b.masks[i]);
    }
}

TEST_CASE("enumeration limits and sampling") {
    std::mt19937_64 rng(35);
    const auto big = random_generic_beam(rng, 25);
    CHECK_THROWS_AS(count_distinct(big), FamilyTooLarge);
    EnumerationOptions sample;
    sample.sample_masks = 200;
    sample.seed = 9;
    const auto fam = enumerate_family(big, sample);
    CHECK(fam.distinct_count >= 150);
    CHECK(fam.distinct_count <= 201);
    CHECK(fam.masks[0].bits() == 0);
    for (std::size_t i = 0; i < fam.members.size(); i += 20) CHECK(same_beampattern(big, fam.members[i]));
    CHECK_THROWS_AS(enumerate_family(beam({0.0, 1.0, 1.0})), DegenerateEndpoints);
}
