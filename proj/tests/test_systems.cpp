#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "orbp/systems.hpp"

using namespace orbp;

TEST_CASE("points round-trip their representation") {
    Point w = Point::word({0, 1, 1, 0});
    CHECK(w.symbolic());
    CHECK(w.symbols() == std::vector<uint8_t>{0, 1, 1, 0});
    CHECK_THROWS_AS((void)w.ticks(), Error);

    Point c = Point::circle(0.5);
    CHECK_FALSE(c.symbolic());
    CHECK(c.ticks() == 0x80000000u);
    CHECK(c.coord() == 0.5);
    CHECK_THROWS_AS((void)c.symbols(), Error);

    CHECK(Point::circle(0.25) == Point::circle_ticks(0x40000000u));
    CHECK(Point::circle(1.25) == Point::circle(0.25));   // reduced mod 1
    CHECK(Point::circle(-0.75) == Point::circle(0.25));
}

TEST_CASE("tick distance is the exact arc metric") {
    CHECK(circle_tick_distance(0, 0) == 0.0);
    CHECK(circle_tick_distance(0, 0x80000000u) == 0.5);
    CHECK(circle_tick_distance(0x80000000u, 0) == 0.5);
    // wraparound: 1/8 before zero vs 1/8 after zero is 1/4 apart
    CHECK(circle_tick_distance(0xE0000000u, 0x20000000u) == 0.25);
    CHECK(circle_tick_distance(1, 0) == 0x1p-32);
}

TEST_CASE("resolving depth brackets eps by powers of two") {
    CHECK(resolving_depth(1.5) == 0);
    CHECK(resolving_depth(1.0) == 1);
    CHECK(resolving_depth(0.3) == 2);
    CHECK(resolving_depth(0.25) == 3);  // strict: 2^-2 == 0.25 does not resolve
    CHECK(resolving_depth(0.125) == 4);
    CHECK(resolving_depth(0.05) == 5);
    CHECK(resolving_depth(1e-30) == 64);
}

TEST_CASE("full shift and sft constrain points") {
    DynSystem full = DynSystem::full_shift(3, 10);
    CHECK(full.alphabet() == 3);
    CHECK(full.word_length() == 10);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(full.allowed(a, b));
    CHECK_NOTHROW(full.check_point(Point::word({0, 2, 1})));
    CHECK_THROWS_AS(full.check_point(Point::word({0, 3})), Error);       // symbol range
    CHECK_THROWS_AS(full.check_point(Point::circle(0.1)), Error);        // wrong kind

    DynSystem golden = DynSystem::sft({{1, 1}, {1, 0}});
    CHECK(golden.allowed(0, 0));
    CHECK(golden.allowed(0, 1));
    CHECK(golden.allowed(1, 0));
    CHECK_FALSE(golden.allowed(1, 1));
    CHECK_NOTHROW(golden.check_point(Point::word({1, 0, 1, 0, 0})));
    CHECK_THROWS_AS(golden.check_point(Point::word({0, 1, 1})), Error);  // forbidden 11
}

TEST_CASE("circle maps act exactly on the lattice") {
    DynSystem d = DynSystem::doubling();
    CHECK(d.apply(Point::circle(0.3)).ticks() == 2 * Point::circle(0.3).ticks());
    CHECK(d.step_ticks(0xC0000000u) == 0x80000000u);  // 3/4 -> 1/2 mod 1

    DynSystem r = DynSystem::rotation(0.25);
    CHECK(r.alpha_ticks() == 0x40000000u);
    CHECK(r.apply(Point::circle(0.9)) == Point::circle(0.15));
    // rotation is an isometry on ticks
    uint32_t a = 12345, b = 987654321;
    CHECK(circle_tick_distance(r.step_ticks(a), r.step_ticks(b)) ==
          circle_tick_distance(a, b));
}

TEST_CASE("shift apply consumes symbols and guards the horizon") {
    DynSystem full = DynSystem::full_shift(2, 8);
    Point x = Point::word({1, 0, 1});
    Point tx = full.apply(x);
    CHECK(tx.symbols() == std::vector<uint8_t>{0, 1});
    CHECK_THROWS_AS(full.apply(Point::word({1})), Error);

    auto seg = full.orbit_segment(Point::word({1, 0, 1, 1, 0}), 3, 2);
    REQUIRE(seg.size() == 3);
    CHECK(seg[0].symbols().size() == 5);
    CHECK(seg[1].symbols() == std::vector<uint8_t>{1, 1, 0});
    CHECK(seg[2].symbols() == std::vector<uint8_t>{0});
    CHECK_THROWS_AS(full.orbit_segment(Point::word({1, 0, 1}), 4, 1), Error);
}

TEST_CASE("base distance: first-difference scale on words, arc on the circle") {
    DynSystem full = DynSystem::full_shift(2);
    CHECK(full.base_distance(Point::word({1, 0}), Point::word({1, 1})) == 0.5);
    CHECK(full.base_distance(Point::word({0, 1, 1}), Point::word({1, 1, 1})) == 1.0);
    CHECK(full.base_distance(Point::word({1, 0, 1, 1}), Point::word({1, 0, 1, 0})) == 0.125);
    // agreement over the shorter word counts as zero
    CHECK(full.base_distance(Point::word({1, 0}), Point::word({1, 0, 1})) == 0.0);

    DynSystem rot = DynSystem::rotation(0.1);
    CHECK(rot.base_distance(Point::circle(0.1), Point::circle(0.9)) ==
          doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("potentials evaluate and shift") {
    double c;
    CHECK(Potential::zero().is_zero());
    CHECK(Potential::zero().constant_value(c));
    CHECK(c == 0.0);
    CHECK(Potential::constant(0.7).constant_value(c));
    CHECK(c == 0.7);
    CHECK_FALSE(Potential::circle("identity").constant_value(c));

    DynSystem full = DynSystem::full_shift(2);
    Potential fs = Potential::first_symbol({0.25, -1.5});
    CHECK(fs(full, Point::word({0, 1})) == 0.25);
    CHECK(fs(full, Point::word({1, 0})) == -1.5);
    CHECK(fs.shifted(1.0)(full, Point::word({1, 0})) == -0.5);
    CHECK(fs.symbol_value(0) == 0.25);

    DynSystem rot = DynSystem::rotation(0.3);
    CHECK(Potential::circle("identity")(rot, Point::circle(0.25)) == 0.25);
    CHECK(Potential::circle("cos")(rot, Point::circle(0.5)) == doctest::Approx(-1.0));
    CHECK(Potential::circle("dist0")(rot, Point::circle(0.75)) == 0.25);
    CHECK(Potential::circle("identity").mean_on_circle() == 0.5);
    CHECK(Potential::circle("cos").mean_on_circle() == 0.0);
    CHECK(Potential::circle("dist0").mean_on_circle() == 0.25);
    CHECK(Potential::circle("dist0").shifted(2.0).mean_on_circle() == 2.25);
    CHECK_THROWS_AS(Potential::circle("nope"), Error);
    CHECK_THROWS_AS(Potential::first_symbol({0.1, 0.2}).mean_on_circle(), Error);
}

TEST_CASE("birkhoff sums walk the q-step orbit") {
    DynSystem full = DynSystem::full_shift(2);
    Potential fs = Potential::first_symbol({1.0, 10.0});
    // word 0 1 1 0 1, q=2 reads symbols at 0, 2, 4
    CHECK(birkhoff_sum(full, fs, Point::word({0, 1, 1, 0, 1}), 3, 2) == 21.0);
    CHECK(birkhoff_sum(full, Potential::constant(0.5), Point::word({0, 1, 1}), 3) == 1.5);

    DynSystem rot = DynSystem::rotation(0.25);
    double s = birkhoff_sum(rot, Potential::circle("identity"), Point::circle(0.0), 4);
    CHECK(s == doctest::Approx(0.0 + 0.25 + 0.5 + 0.75).epsilon(1e-12));
}

TEST_CASE("describe strings are stable") {
    CHECK(DynSystem::full_shift(2).describe() == "fullshift(k=2,L=256)");
    CHECK(DynSystem::sft({{1, 1}, {1, 0}}).describe() == "sft(k=2,rows=11|10,L=256)");
    CHECK(DynSystem::doubling().describe() == "doubling");
    CHECK(Potential::zero().describe() == "zero");
}
