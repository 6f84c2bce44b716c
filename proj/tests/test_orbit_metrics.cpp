#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "orbp/orbit_metrics.hpp"
#include "orbp/reference.hpp"
#include "orbp/systems.hpp"

using namespace orbp;

namespace {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(uint64_t seed) : eng(seed) {}
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    int below(int k) { return static_cast<int>(uniform() * k); }
    uint32_t ticks() { return static_cast<uint32_t>(eng() >> 32); }
};

Point random_word(Rng& rng, int k, int len) {
    std::vector<uint8_t> w(static_cast<size_t>(len));
    for (auto& s : w) s = static_cast<uint8_t>(rng.below(k));
    return Point::word(std::move(w));
}

Point alternating(int first, int len) {
    std::vector<uint8_t> w(static_cast<size_t>(len));
    for (int i = 0; i < len; ++i) w[i] = static_cast<uint8_t>((first + i) % 2);
    return Point::word(std::move(w));
}

}  // namespace

TEST_CASE("doubling pair 0 vs 0.001: the orbit separates geometrically") {
    DynSystem d = DynSystem::doubling();
    Point x = Point::circle(0.0), y = Point::circle(0.001);
    CHECK(bowen_distance(d, x, y, 3) == doctest::Approx(0.004).epsilon(1e-6));
    CHECK(mean_distance(d, x, y, 3) == doctest::Approx(0.007 / 3).epsilon(1e-6));
    // prefix means increase here, so the max-mean is the full mean
    CHECK(maxmean_distance(d, x, y, 3) == mean_distance(d, x, y, 3));
    CHECK(bowen_distance(d, x, y, 3, 2) == doctest::Approx(0.016).epsilon(1e-6));
}

TEST_CASE("alternating words: one dropped index aligns everything") {
    DynSystem full = DynSystem::full_shift(2);
    Point x = alternating(0, 16), y = alternating(1, 16);
    const int n = 4;
    CHECK(bowen_distance(full, x, y, n) == 1.0);
    CHECK(mean_distance(full, x, y, n) == 1.0);
    CHECK(maxmean_distance(full, x, y, n) == 1.0);
    CHECK(fk_distance(full, x, y, n) == 0.25);
    CHECK(edit_distance(x, y, n) == 0.25);

    MatchResult m = match_value(full, x, y, MatchParams{n, 1, 0.5});
    CHECK(m.size == 3);
    CHECK(m.value == 0.25);
    REQUIRE(m.witness.size() == 3);
    int pi = -1, pj = -1;
    for (auto [i, j] : m.witness) {
        CHECK(i > pi);
        CHECK(j > pj);
        pi = i;
        pj = j;
        CHECK((i + j) % 2 == 1);  // only opposite parities are close
    }
}

TEST_CASE("match DP agrees with exhaustive search") {
    DynSystem systems[] = {DynSystem::full_shift(2, 64), DynSystem::full_shift(3, 64)};
    Rng rng(11);
    for (int t = 0; t < 120; ++t) {
        const DynSystem& sys = systems[t % 2];
        int n = 2 + rng.below(6);
        int q = 1 + rng.below(2);
        MatchParams params{n, q, 0.0};
        params.delta = t % 3 == 0 ? 1.0 : 0.05 + rng.uniform();
        Point x = random_word(rng, sys.alphabet(), 24);
        Point y = random_word(rng, sys.alphabet(), 24);
        MatchResult m = match_value(sys, x, y, params);
        CHECK(m.size == reference::max_match_size_exhaustive(sys, x, y, params));
        CHECK(m.value == match_defect(n, m.size));
        // witness pairs must be strict matches
        for (auto [i, j] : m.witness) {
            double dij = sys.base_distance(sys.orbit_segment(x, n, q)[i],
                                           sys.orbit_segment(y, n, q)[j]);
            CHECK(dij < params.delta);
        }
    }
}

TEST_CASE("fk distance equals its definition and both policies agree") {
    DynSystem systems[] = {DynSystem::full_shift(2, 64),
                           DynSystem::sft({{1, 1}, {1, 0}}, 64)};
    Rng rng(23);
    for (int t = 0; t < 80; ++t) {
        const DynSystem& sys = systems[t % 2];
        int n = 1 + rng.below(8);
        int q = 1 + rng.below(2);
        // golden-mean words need admissibility: redraw until valid
        auto admissible = [&](const Point& p) {
            for (size_t i = 1; i < p.symbols().size(); ++i)
                if (!sys.allowed(p.symbols()[i - 1], p.symbols()[i])) return false;
            return true;
        };
        Point x = random_word(rng, 2, 32);
        while (!admissible(x)) x = random_word(rng, 2, 32);
        Point y = random_word(rng, 2, 32);
        while (!admissible(y)) y = random_word(rng, 2, 32);

        double fast = fk_distance(sys, x, y, n, q);
        CHECK(fast == fk_distance(sys, x, y, n, q, FkPolicy::Sweep));
        CHECK(fast == doctest::Approx(reference::fk_distance_definition(sys, x, y, n, q))
                          .epsilon(1e-12));
    }
}

TEST_CASE("metric chain: mean <= maxmean <= bowen, fk <= bowen") {
    DynSystem systems[] = {DynSystem::full_shift(2, 64), DynSystem::doubling(),
                           DynSystem::rotation(0.6180339887498949)};
    Rng rng(7);
    for (int t = 0; t < 150; ++t) {
        const DynSystem& sys = systems[t % 3];
        int n = 1 + rng.below(12);
        int q = 1 + rng.below(3);
        Point x = sys.symbolic() ? random_word(rng, 2, 64) : Point::circle_ticks(rng.ticks());
        Point y = sys.symbolic() ? random_word(rng, 2, 64) : Point::circle_ticks(rng.ticks());
        double dm = mean_distance(sys, x, y, n, q);
        double dmm = maxmean_distance(sys, x, y, n, q);
        double db = bowen_distance(sys, x, y, n, q);
        double dfk = fk_distance(sys, x, y, n, q);
        CHECK(dm <= dmm + 1e-15);
        CHECK(dmm <= db + 1e-15);
        CHECK(dfk <= db + 1e-12);
        // n = 1 collapses the first three
        if (n == 1) {
            CHECK(dm == db);
            CHECK(dmm == db);
        }
    }
}

TEST_CASE("ball membership is exactly distance < radius") {
    DynSystem systems[] = {DynSystem::full_shift(2, 64), DynSystem::rotation(0.37)};
    MetricFamily fams[] = {MetricFamily::Bowen, MetricFamily::Mean, MetricFamily::MaxMean,
                           MetricFamily::FeldmanKatok};
    Rng rng(41);
    for (int t = 0; t < 200; ++t) {
        const DynSystem& sys = systems[t % 2];
        MetricKind kind{fams[t % 4], 1 + rng.below(2)};
        int n = 1 + rng.below(10);
        Point x = sys.symbolic() ? random_word(rng, 2, 64) : Point::circle_ticks(rng.ticks());
        Point y = sys.symbolic() ? random_word(rng, 2, 64) : Point::circle_ticks(rng.ticks());
        double dist = orbit_distance(sys, x, y, n, kind);
        // probe at the distance itself (strictness), just above, and far out
        double probes[] = {dist > 0 ? dist : 0x1p-40, std::nextafter(dist, 2.0), dist + 0.25,
                           0.5 * dist};
        for (double r : probes) {
            if (!(r > 0)) continue;
            CHECK(orbit_ball_contains(sys, x, y, n, r, kind) == (dist < r));
        }
    }
}

TEST_CASE("rotation fk membership equals the grid DP distance") {
    DynSystem rot = DynSystem::rotation(0.6180339887498949);
    Rng rng(63);
    for (int t = 0; t < 150; ++t) {
        int n = 1 + rng.below(20);
        int q = 1 + rng.below(3);
        MetricKind kind{MetricFamily::FeldmanKatok, q};
        Point x = Point::circle_ticks(rng.ticks());
        Point y = Point::circle_ticks(rng.ticks());
        double dist = fk_distance(rot, x, y, n, q);  // grid DP route
        double r = 0.01 + rng.uniform() * 0.6;
        CHECK(orbit_ball_contains(rot, x, y, n, r, kind) == (dist < r));  // shift-scan route
    }
}

TEST_CASE("min match size inverts the defect") {
    for (int n : {1, 2, 5, 8, 12, 16, 64}) {
        for (double r : {0.01, 1.0 / n, 0.1249, 0.125, 0.26, 0.5, 0.9999}) {
            int m = min_match_size(n, r);
            CHECK(m >= 0);
            CHECK(m <= n);
            CHECK(match_defect(n, m) < r);
            if (m > 0) CHECK_FALSE(match_defect(n, m - 1) < r);
        }
        CHECK(min_match_size(n, 1.0 / n) == n);  // radius <= 1/n degenerates to Bowen
    }
    CHECK(min_match_size(12, 0.05) == 12);
    CHECK(min_match_size(16, 0.0625) == 16);
    CHECK(min_match_size(8, 0.25) == 7);
}

TEST_CASE("edit distance needs n symbols") {
    Point x = Point::word({0, 1, 0});
    Point y = Point::word({0, 1, 1});
    CHECK(edit_distance(x, y, 3) == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS(edit_distance(x, y, 4), Error);
}

TEST_CASE("fk distance rejects oversized horizons and bad deltas") {
    DynSystem full = DynSystem::full_shift(2, 1024);
    Rng rng(1);
    Point x = random_word(rng, 2, 600), y = random_word(rng, 2, 600);
    CHECK_THROWS_AS(fk_distance(full, x, y, 300), Error);
    CHECK_THROWS_AS(match_value(full, x, y, MatchParams{4, 1, 0.0}), Error);
}
