#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "orbp/estimators.hpp"
#include "orbp/measures.hpp"
#include "orbp/systems.hpp"

using namespace orbp;

namespace {

constexpr double kLog2 = 0.6931471805599453;
constexpr double kLogGolden = 0.4812118250596035;

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(uint64_t seed) : eng(seed) {}
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    int below(int k) { return static_cast<int>(uniform() * k); }
};

EmpiricalMeasure random_small_measure(const DynSystem& sys, Rng& rng, int m) {
    EmpiricalMeasure mu =
        sample_measure(sys.symbolic() ? MeasureSpec::bernoulli({0.5, 0.5})
                                      : MeasureSpec::lebesgue(),
                       sys, m, rng.eng());
    // reweight unevenly but exactly normalized
    double total = 0.0;
    for (int i = 0; i < m; ++i) total += (mu.weights[i] = 0.05 + rng.uniform());
    double prefix = 0.0;
    for (int i = 0; i + 1 < m; ++i) prefix += (mu.weights[i] /= total);
    mu.weights[m - 1] = 1.0 - prefix;
    return mu;
}

}  // namespace

TEST_CASE("closed-form shift pressure matches hand eigenvalues") {
    // golden mean, zero potential: log of the Perron root of [[1,1],[1,0]]
    CHECK(exact_shift_pressure(2, {{1, 1}, {1, 0}}, {0.0, 0.0}) ==
          doctest::Approx(kLogGolden).epsilon(1e-11));
    // full shift closed form log(sum e^phi)
    CHECK(exact_shift_pressure(3, {}, {0.0, 0.0, 0.0}) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-13));
    CHECK(exact_shift_pressure(2, {}, {0.3, -0.2}) ==
          doctest::Approx(std::log(std::exp(0.3) + std::exp(-0.2))).epsilon(1e-13));
    // golden mean with potential: M = [[e^a, e^a], [e^b, 0]],
    // lambda = (e^a + sqrt(e^2a + 4 e^(a+b)))/2
    double a = 0.3, b = -0.2, ea = std::exp(a), eb = std::exp(b);
    double lambda = (ea + std::sqrt(ea * ea + 4 * ea * eb)) / 2;
    CHECK(exact_shift_pressure(2, {{1, 1}, {1, 0}}, {a, b}) ==
          doctest::Approx(std::log(lambda)).epsilon(1e-11));
    // a period-2 permutation matrix is not primitive
    CHECK_THROWS_AS(exact_shift_pressure(2, {{0, 1}, {1, 0}}, {0.0, 0.0}), Error);
}

TEST_CASE("pressure oracles cover every built-in family") {
    CHECK(exact_topological_pressure(DynSystem::full_shift(2), Potential::zero()) == kLog2);
    CHECK(exact_topological_pressure(DynSystem::sft({{1, 1}, {1, 0}}), Potential::zero()) ==
          doctest::Approx(kLogGolden).epsilon(1e-11));
    CHECK(exact_topological_pressure(DynSystem::rotation(0.37),
                                     Potential::circle("identity")) == 0.5);
    CHECK(exact_topological_pressure(DynSystem::doubling(), Potential::constant(0.1)) ==
          doctest::Approx(kLog2 + 0.1));

    DynSystem full = DynSystem::full_shift(2);
    CHECK(exact_measure_pressure(full, MeasureSpec::bernoulli({0.5, 0.5}),
                                 Potential::zero()) == doctest::Approx(kLog2));
    double p = 0.3;
    double h = -p * std::log(p) - (1 - p) * std::log(1 - p);
    CHECK(exact_measure_pressure(full, MeasureSpec::bernoulli({p, 1 - p}),
                                 Potential::zero()) == doctest::Approx(h).epsilon(1e-12));
    // entropy + integral for a markov chain with per-symbol potential
    MeasureSpec mk = MeasureSpec::markov({{0.6, 0.4}, {1.0, 0.0}});
    double pi0 = 5.0 / 7, pi1 = 2.0 / 7;
    double hm = pi0 * (-0.6 * std::log(0.6) - 0.4 * std::log(0.4));
    Potential fs = Potential::first_symbol({0.2, -0.1});
    CHECK(exact_measure_pressure(DynSystem::sft({{1, 1}, {1, 0}}), mk, fs) ==
          doctest::Approx(hm + pi0 * 0.2 - pi1 * 0.1).epsilon(1e-9));
    CHECK(exact_measure_pressure(DynSystem::rotation(0.37), MeasureSpec::lebesgue(),
                                 Potential::circle("dist0")) == doctest::Approx(0.25));
}

TEST_CASE("cover oracle sandwich: exact <= greedy <= (1+ln m) exact") {
    DynSystem systems[] = {DynSystem::full_shift(2), DynSystem::rotation(0.6180339887498949)};
    Rng rng(17);
    for (int t = 0; t < 50; ++t) {
        const DynSystem& sys = systems[t % 2];
        int m = 4 + rng.below(14);
        EmpiricalMeasure mu = random_small_measure(sys, rng, m);
        MetricKind kind{static_cast<MetricFamily>(t % 4), 1 + t % 2};
        int n = 1 + rng.below(4);
        double eps = 0.1 + 0.8 * rng.uniform();
        CoverSolution greedy =
            covering_weight(sys, Potential::zero(), mu, n, eps, kind, CoverMethod::Greedy);
        CoverSolution exact = covering_weight(sys, Potential::zero(), mu, n, eps, kind,
                                              CoverMethod::ExactExhaustive);
        CHECK(exact.total_weight <= greedy.total_weight + 1e-12);
        CHECK(greedy.total_weight <= (1 + std::log(m)) * exact.total_weight + 1e-9);
        CHECK(exact.covered_mass > 1 - eps);
        CHECK(greedy.covered_mass > 1 - eps);
    }
}

TEST_CASE("exact covering weight is monotone in radius and ball size") {
    DynSystem full = DynSystem::full_shift(2);
    Rng rng(29);
    for (int t = 0; t < 25; ++t) {
        EmpiricalMeasure mu = random_small_measure(full, rng, 4 + rng.below(12));
        int n = 2 + rng.below(4);
        double eps = 0.15 + 0.5 * rng.uniform();
        auto weight = [&](MetricFamily f, double e) {
            return covering_weight(full, Potential::zero(), mu, n, e, MetricKind{f, 1},
                                   CoverMethod::ExactExhaustive)
                .total_weight;
        };
        // wider radius never raises the optimal weight
        CHECK(weight(MetricFamily::Bowen, eps + 0.2) <= weight(MetricFamily::Bowen, eps));
        // bowen balls sit inside maxmean inside mean; fk contains bowen
        double wb = weight(MetricFamily::Bowen, eps);
        CHECK(weight(MetricFamily::MaxMean, eps) <= wb);
        CHECK(weight(MetricFamily::Mean, eps) <= weight(MetricFamily::MaxMean, eps));
        CHECK(weight(MetricFamily::FeldmanKatok, eps) <= wb);
    }
}

TEST_CASE("shifting the potential shifts exact estimates by the same constant") {
    DynSystem full = DynSystem::full_shift(2);
    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        EmpiricalMeasure mu = random_small_measure(full, rng, 4 + rng.below(12));
        int n = 2 + rng.below(4);
        double eps = 0.2 + 0.5 * rng.uniform();
        double c = (rng.uniform() - 0.5) * 2.0;
        Potential base = Potential::first_symbol({rng.uniform(), -rng.uniform()});
        MetricKind kind{static_cast<MetricFamily>(t % 4), 1};
        PressureEstimate before = measure_pressure_estimate(full, base, mu, n, eps, kind,
                                                            CoverMethod::ExactExhaustive);
        PressureEstimate after = measure_pressure_estimate(full, base.shifted(c), mu, n, eps,
                                                           kind, CoverMethod::ExactExhaustive);
        CHECK(std::fabs(after.value - (before.value + c)) < 1e-9);
    }
}

TEST_CASE("word enumeration and cylinder sums agree") {
    DynSystem golden = DynSystem::sft({{1, 1}, {1, 0}});
    // golden-mean word counts are shifted fibonacci: F(l+2)
    CHECK(cylinder_weight_sum(golden, Potential::zero(), 5, 1) == 13.0);
    CHECK(cylinder_weight_sum(golden, Potential::zero(), 10, 1) == 144.0);
    CHECK(enumerate_admissible_words(golden, 5, 100).size() == 13);
    CHECK_THROWS_AS(enumerate_admissible_words(golden, 10, 100), Error);  // cap

    DynSystem full = DynSystem::full_shift(2);
    CHECK(cylinder_weight_sum(full, Potential::zero(), 6, 1) == 64.0);
    // weighted: sum over length-2 words of e^(phi(w0) + phi(w1))
    Potential fs = Potential::first_symbol({0.5, -0.25});
    double z1 = std::exp(0.5) + std::exp(-0.25);
    CHECK(cylinder_weight_sum(full, fs, 2, 2) == doctest::Approx(z1 * z1).epsilon(1e-13));
    // n < length: trailing symbols contribute no potential, only multiplicity
    CHECK(cylinder_weight_sum(full, fs, 3, 2) == doctest::Approx(z1 * z1 * 2).epsilon(1e-13));

    auto words = enumerate_admissible_words(full, 3, 8);
    REQUIRE(words.size() == 8);
    CHECK(words[0].symbols() == std::vector<uint8_t>{0, 0, 0});  // lexicographic
    CHECK(words[7].symbols() == std::vector<uint8_t>{1, 1, 1});
}

TEST_CASE("the cylinder fast path equals the materialized cover") {
    DynSystem full = DynSystem::full_shift(2);
    DynSystem golden = DynSystem::sft({{1, 1}, {1, 0}});
    Potential fs = Potential::first_symbol({0.1, -0.3});
    for (const DynSystem* sys : {&full, &golden}) {
        for (int n : {2, 3, 4}) {
            double eps = 0.25;  // depth 3: grids stay tiny
            MetricKind bowen{MetricFamily::Bowen, 1};
            CoverSolution fast = topological_cover_weight(*sys, fs, n, eps, bowen);
            auto grid = enumerate_admissible_words(*sys, (n - 1) + resolving_depth(eps), 4096);
            CoverSolution greedy =
                topological_cover_weight_on_grid(*sys, fs, n, eps, bowen, grid);
            CHECK(fast.total_weight == doctest::Approx(greedy.total_weight).epsilon(1e-12));
            CHECK(fast.center_count == doctest::Approx(grid.size()));  // singleton balls
        }
    }
}

TEST_CASE("spanning pressure equals the bowen cover route") {
    DynSystem full = DynSystem::full_shift(2);
    PressureEstimate sp = spanning_pressure(full, Potential::zero(), 4, 0.25);
    // grid length 4-1+3 = 6: 64 singleton balls
    CHECK(sp.value == doctest::Approx(std::log(64.0) / 4).epsilon(1e-12));
    PressureEstimate cover = topological_pressure_estimate(full, Potential::zero(), 4, 0.25,
                                                           MetricKind{MetricFamily::Bowen, 1});
    CHECK(sp.value == cover.value);
}

TEST_CASE("circle covers count arcs") {
    DynSystem rot = DynSystem::rotation(0.6180339887498949);
    // rotation is an isometry: bowen balls are arcs of width 2 eps regardless
    // of n. eps = 1/4 keeps the 8-point grid exactly on the lattice, so each
    // ball holds exactly 3 grid points (the +-2 neighbors sit at distance
    // exactly eps, excluded by strictness) and the minimum cover is 3 arcs.
    PressureEstimate est = topological_pressure_estimate(rot, Potential::zero(), 8, 0.25,
                                                         MetricKind{MetricFamily::Bowen, 1});
    CHECK(est.centers == 3.0);
    CHECK(est.value == doctest::Approx(std::log(3.0) / 8));

    std::vector<Point> coarse = {Point::circle(0.0), Point::circle(0.5)};
    CHECK_THROWS_AS(
        topological_cover_weight_on_grid(rot, Potential::zero(), 8, 0.25,
                                         MetricKind{MetricFamily::Bowen, 1}, coarse),
        Error);
}

TEST_CASE("grid density is enforced for word grids") {
    DynSystem full = DynSystem::full_shift(2);
    // all words of length 4, but n=3 eps=0.25 needs length 5 prefixes complete
    auto grid = enumerate_admissible_words(full, 4, 4096);
    CHECK_THROWS_AS(topological_cover_weight_on_grid(full, Potential::zero(), 3, 0.25,
                                                     MetricKind{MetricFamily::Bowen, 1}, grid),
                    Error);
    auto fine = enumerate_admissible_words(full, 5, 4096);
    CHECK_NOTHROW(topological_cover_weight_on_grid(full, Potential::zero(), 3, 0.25,
                                                   MetricKind{MetricFamily::Bowen, 1}, fine));
}

TEST_CASE("inf over q keeps every branch and the smallest argmin") {
    DynSystem rot = DynSystem::rotation(0.6180339887498949);
    EmpiricalMeasure mu = sample_measure(MeasureSpec::lebesgue(), rot, 400, 9);
    PressureEstimate est = inf_over_q_measure(rot, Potential::zero(), mu, 8, 0.2,
                                              MetricFamily::Bowen, 4);
    REQUIRE(est.per_q.size() == 4);
    double best = est.per_q[0].second;
    for (auto [q, v] : est.per_q) best = std::min(best, v);
    CHECK(est.value == best);
    CHECK(est.kind.q >= 1);
    CHECK(est.per_q[static_cast<size_t>(est.kind.q) - 1].second == est.value);
    for (size_t i = 0; i + 1 < est.per_q.size(); ++i)
        CHECK(est.per_q[i].first == static_cast<int>(i) + 1);
    // rotation estimates are q-invariant for isometric kinds
    for (auto [q, v] : est.per_q) CHECK(v == est.value);
}

TEST_CASE("doubling measure entropy extrapolates to log 2") {
    DynSystem dbl = DynSystem::doubling();
    EmpiricalMeasure mu = sample_measure(MeasureSpec::lebesgue(), dbl, 8000, 1);
    auto value = [&](int n) {
        return measure_pressure_estimate(dbl, Potential::zero(), mu, n, 0.2,
                                         MetricKind{MetricFamily::Bowen, 1})
            .value;
    };
    double v4 = value(4), v8 = value(8);
    double extrapolated = (8 * v8 - 4 * v4) / 4;
    CHECK(std::fabs(extrapolated - kLog2) < 0.05);
}

TEST_CASE("convergence tables keep failed cells and summarize the rest") {
    DynSystem golden = DynSystem::sft({{1, 1}, {1, 0}}, 24);  // short words: n=32 overflows
    TableSpec spec;
    spec.kinds = {MetricKind{MetricFamily::Bowen, 1}};
    spec.ns = {8, 16, 32};
    spec.epss = {0.0625};
    spec.variant = EstimateVariant::TopologicalCover;
    double oracle = exact_topological_pressure(golden, Potential::zero());
    ConvergenceTable table = convergence_table(golden, Potential::zero(), nullptr, spec, oracle);

    REQUIRE(table.cells.size() == 3);
    CHECK(table.cells[0].status == "ok");
    CHECK(table.cells[1].status == "ok");
    CHECK(table.cells[2].status == "HORIZON_EXHAUSTED");  // 32 needs length 36 > 24
    CHECK(std::isnan(table.cells[2].estimate.value));

    REQUIRE(table.summary.size() == 1);
    const TableSummaryRow& s = table.summary[0];
    // stabilized: mean of the last two ok values; extrapolated: in 1/n from them
    double v8 = table.cells[0].estimate.value, v16 = table.cells[1].estimate.value;
    CHECK(s.stabilized == (v8 + v16) / 2);
    CHECK(s.extrapolated == doctest::Approx((16 * v16 - 8 * v8) / 8).epsilon(1e-12));
    CHECK(std::fabs(s.extrapolated - oracle) < 1e-5);
    CHECK(table.oracle == oracle);
}

TEST_CASE("tables validate their spec") {
    DynSystem full = DynSystem::full_shift(2);
    TableSpec spec;
    spec.kinds = {MetricKind{MetricFamily::Mean, 1}};
    spec.ns = {4};
    spec.epss = {0.25};
    spec.variant = EstimateVariant::MeasureTheoretic;
    CHECK_THROWS_AS(convergence_table(full, Potential::zero(), nullptr, spec, 0.0),
                    Error);  // measure variant needs mu
    spec.variant = EstimateVariant::TopologicalSpanning;
    CHECK_THROWS_AS(convergence_table(full, Potential::zero(), nullptr, spec, 0.0),
                    Error);  // spanning is bowen q=1 only
}

TEST_CASE("brin-katok profiles order their quantiles") {
    DynSystem full = DynSystem::full_shift(2);
    EmpiricalMeasure mu = sample_measure(MeasureSpec::bernoulli({0.5, 0.5}), full, 8000, 5);
    EmpiricalMeasure centers = sample_measure(MeasureSpec::bernoulli({0.5, 0.5}), full, 15, 6);
    BrinKatokSummary s = brin_katok_profile(mu, full, centers.points, 0.125, 6,
                                            MetricKind{MetricFamily::Bowen, 1});
    CHECK(s.empty_balls == 0);
    REQUIRE(s.values.size() == 15);
    CHECK(s.q25 <= s.median);
    CHECK(s.median <= s.q75);
    // the ball is the 9-cylinder: mass 2^-9, so estimates hover near (9/6) log 2
    CHECK(std::fabs(s.median - 1.5 * kLog2) < 0.2);
}
