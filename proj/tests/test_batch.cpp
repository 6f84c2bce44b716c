#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <vector>

#include "doctest.h"
#include "orbp/batch.hpp"
#include "orbp/measures.hpp"
#include "orbp/systems.hpp"

using namespace orbp;

namespace {

const MetricFamily kFams[] = {MetricFamily::Bowen, MetricFamily::Mean, MetricFamily::MaxMean,
                              MetricFamily::FeldmanKatok};

}  // namespace

TEST_CASE("thread count is at least one") { CHECK(effective_threads() >= 1); }

TEST_CASE("parallel distance matrix equals the serial one bitwise") {
    DynSystem systems[] = {DynSystem::full_shift(2), DynSystem::rotation(0.6180339887498949)};
    for (const DynSystem& sys : systems) {
        EmpiricalMeasure mu = sample_measure(
            sys.symbolic() ? MeasureSpec::bernoulli({0.5, 0.5}) : MeasureSpec::lebesgue(), sys,
            60, 13);
        std::vector<Point> xs(mu.points.begin(), mu.points.begin() + 25);
        for (MetricFamily f : kFams) {
            for (int q : {1, 2}) {
                MetricKind kind{f, q};
                auto par = distance_matrix(sys, xs, mu.points, 7, kind);
                auto ser = distance_matrix_serial(sys, xs, mu.points, 7, kind);
                REQUIRE(par.size() == ser.size());
                REQUIRE(par.size() == xs.size() * mu.points.size());
                for (size_t i = 0; i < par.size(); ++i) CHECK(par[i] == ser[i]);
            }
        }
    }
}

TEST_CASE("parallel membership flags equal the serial ones") {
    DynSystem sys = DynSystem::full_shift(3);
    EmpiricalMeasure mu = sample_measure(MeasureSpec::bernoulli({0.2, 0.3, 0.5}), sys, 400, 3);
    for (MetricFamily f : kFams) {
        MetricKind kind{f, 1};
        auto par = membership_flags(sys, mu.points[5], mu.points, 6, 0.2, kind);
        auto ser = membership_flags_serial(sys, mu.points[5], mu.points, 6, 0.2, kind);
        CHECK(par == ser);
        CHECK(par[5] == 1);  // the center is inside its own ball
    }
}

TEST_CASE("coverage lists are symmetric, sorted, and match the serial path") {
    DynSystem sys = DynSystem::rotation(0.37);
    EmpiricalMeasure mu = sample_measure(MeasureSpec::lebesgue(), sys, 300, 21);
    for (MetricFamily f : kFams) {
        MetricKind kind{f, 1};
        auto par = coverage_lists(sys, mu.points, 9, 0.15, kind);
        auto ser = coverage_lists_serial(sys, mu.points, 9, 0.15, kind);
        REQUIRE(par.size() == ser.size());
        for (size_t i = 0; i < par.size(); ++i) {
            CHECK(par[i] == ser[i]);
            // ascending and reflexive
            CHECK(std::is_sorted(par[i].begin(), par[i].end()));
            CHECK(std::find(par[i].begin(), par[i].end(), static_cast<uint32_t>(i)) !=
                  par[i].end());
        }
        // symmetry: j in ball(i) iff i in ball(j)
        for (size_t i = 0; i < par.size(); ++i)
            for (uint32_t j : par[i])
                CHECK(std::find(par[j].begin(), par[j].end(), static_cast<uint32_t>(i)) !=
                      par[j].end());
    }
}
