#include "orbp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <random>

#include "orbp/estimators.hpp"
#include "orbp/measures.hpp"
#include "orbp/orbit_metrics.hpp"
#include "orbp/reference.hpp"
#include "orbp/systems.hpp"

namespace orbp {

namespace {

// Same explicit engine-to-value transforms as the sampling layer, so suite
// instances are identical across platforms and reruns.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(uint64_t seed) : eng(seed) {}
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    int below(int k) { return static_cast<int>(uniform() * k); }
    uint32_t ticks() { return static_cast<uint32_t>(eng() >> 32); }
};

std::vector<DynSystem> suite_systems() {
    std::vector<DynSystem> out;
    out.push_back(DynSystem::full_shift(2));
    out.push_back(DynSystem::sft({{1, 1}, {1, 0}}));
    out.push_back(DynSystem::doubling());
    out.push_back(DynSystem::rotation(0.6180339887498949));
    return out;
}

Point random_point(const DynSystem& system, int length, Rng& rng) {
    if (!system.symbolic()) return Point::circle_ticks(rng.ticks());
    const int k = system.alphabet();
    std::vector<uint8_t> w(length);
    w[0] = static_cast<uint8_t>(rng.below(k));
    for (int i = 1; i < length; ++i) {
        uint8_t succ[256];
        int cnt = 0;
        for (int b = 0; b < k; ++b)
            if (system.allowed(w[i - 1], b)) succ[cnt++] = static_cast<uint8_t>(b);
        w[i] = succ[rng.below(cnt)];
    }
    return Point::word(std::move(w));
}

Potential suite_potential(const DynSystem& system, int variant, Rng& rng) {
    if (variant == 0) return Potential::constant(rng.uniform() - 0.5);
    if (!system.symbolic()) {
        const char* names[] = {"identity", "cos", "dist0"};
        return Potential::circle(names[variant % 3]);
    }
    std::vector<double> table(system.alphabet());
    for (double& v : table) v = rng.uniform() - 0.5;
    return Potential::first_symbol(std::move(table));
}

void record(SuiteResult& r, bool ok, double magnitude, const char* fmt, ...) {
    ++r.checked;
    if (ok) return;
    ++r.failures;
    if (magnitude >= r.worst) {
        r.worst = magnitude;
        char buf[256];
        va_list args;
        va_start(args, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, args);
        va_end(args);
        r.detail = buf;
    }
}

SuiteResult suite_chain(int n_max, int pairs, Rng& rng) {
    SuiteResult r;
    r.name = "chain";
    auto systems = suite_systems();
    const int qs[] = {1, 2, 4};
    for (int t = 0; t < pairs; ++t) {
        const DynSystem& sys = systems[t % systems.size()];
        int q = qs[(t / systems.size()) % 3];
        int n = 1 + rng.below(n_max);
        Point x = random_point(sys, sys.word_length(), rng);
        Point y = random_point(sys, sys.word_length(), rng);
        double dm = mean_distance(sys, x, y, n, q);
        double dmm = maxmean_distance(sys, x, y, n, q);
        double db = bowen_distance(sys, x, y, n, q);
        double dfk = fk_distance(sys, x, y, n, q);
        record(r, dm <= dmm + 1e-12, dm - dmm, "mean %.17g > maxmean %.17g (%s n=%d q=%d)",
               dm, dmm, sys.describe().c_str(), n, q);
        record(r, dmm <= db + 1e-12, dmm - db, "maxmean %.17g > bowen %.17g (%s n=%d q=%d)",
               dmm, db, sys.describe().c_str(), n, q);
        record(r, dfk <= db + 1e-12, dfk - db, "fk %.17g > bowen %.17g (%s n=%d q=%d)", dfk,
               db, sys.describe().c_str(), n, q);
    }
    return r;
}

SuiteResult suite_axioms(int n_max, int pairs, Rng& rng) {
    SuiteResult r;
    r.name = "axioms";
    auto systems = suite_systems();
    const int qs[] = {1, 2, 4};
    const MetricFamily families[] = {MetricFamily::Bowen, MetricFamily::Mean,
                                     MetricFamily::MaxMean, MetricFamily::FeldmanKatok};
    for (int t = 0; t < pairs; ++t) {
        const DynSystem& sys = systems[t % systems.size()];
        int q = qs[(t / systems.size()) % 3];
        int n = 1 + rng.below(n_max);
        Point x = random_point(sys, sys.word_length(), rng);
        Point y = random_point(sys, sys.word_length(), rng);
        Point z = random_point(sys, sys.word_length(), rng);
        for (MetricFamily fam : families) {
            MetricKind kind{fam, q};
            double dxy = orbit_distance(sys, x, y, n, kind);
            double dyx = orbit_distance(sys, y, x, n, kind);
            double dxx = orbit_distance(sys, x, x, n, kind);
            double dxz = orbit_distance(sys, x, z, n, kind);
            double dyz = orbit_distance(sys, y, z, n, kind);
            record(r, dxy == dyx, std::fabs(dxy - dyx),
                   "%s asymmetric by %.3g (%s n=%d q=%d)", metric_family_name(fam),
                   std::fabs(dxy - dyx), sys.describe().c_str(), n, q);
            record(r, dxx == 0.0, std::fabs(dxx), "%s d(x,x)=%.3g != 0 (%s n=%d q=%d)",
                   metric_family_name(fam), dxx, sys.describe().c_str(), n, q);
            record(r, dxz <= dxy + dyz + 1e-9, dxz - (dxy + dyz),
                   "%s triangle broken by %.3g (%s n=%d q=%d)", metric_family_name(fam),
                   dxz - (dxy + dyz), sys.describe().c_str(), n, q);
        }
    }
    return r;
}

SuiteResult suite_fk_oracle(int n_max, int pairs, Rng& rng, FaultMode fault) {
    SuiteResult r;
    r.name = "fk-oracle";
    std::vector<DynSystem> systems;
    systems.push_back(DynSystem::full_shift(2));
    systems.push_back(DynSystem::sft({{1, 1}, {1, 0}}));

    auto compare = [&](const DynSystem& sys, const Point& x, const Point& y,
                       MatchParams params) {
        int dp = match_value(sys, x, y, params).size;
        MatchParams ref_params = params;
        if (fault == FaultMode::LooseMatch)
            ref_params.delta =
                std::nextafter(params.delta, std::numeric_limits<double>::infinity());
        int ref = reference::max_match_size_exhaustive(sys, x, y, ref_params);
        record(r, dp == ref, std::fabs(dp - ref),
               "match size %d != exhaustive %d (%s n=%d q=%d delta=%.17g)", dp, ref,
               sys.describe().c_str(), params.n, params.q, params.delta);
    };

    // Constructed tie: x and y differ exactly at index 0 with base distance
    // 1.0 = delta, so strict and non-strict matching disagree by design.
    for (const DynSystem& sys : systems) {
        std::vector<uint8_t> wx(32, 0), wy(32, 0);
        wx[0] = 1;
        compare(sys, Point::word(wx), Point::word(wy), MatchParams{4, 1, 1.0});
    }

    int nm = std::min(n_max, 8);
    for (int t = 0; t < pairs; ++t) {
        const DynSystem& sys = systems[t % 2];
        int q = 1 + (t / 2) % 2;
        int n = 1 + rng.below(nm);
        Point x = random_point(sys, sys.word_length(), rng);
        Point y = random_point(sys, sys.word_length(), rng);
        double delta;
        switch (t % 3) {
            case 0: delta = bowen_distance(sys, x, y, n, q); break;  // forces ties
            case 1: delta = rng.uniform(); break;
            default: delta = static_cast<double>(1 + rng.below(n)) / n;
        }
        if (!(delta > 0.0)) delta = 0.5;  // coinciding windows; delta must be positive
        compare(sys, x, y, MatchParams{n, q, delta});
    }
    return r;
}

SuiteResult suite_monotone(int n_max, int pairs, Rng& rng) {
    SuiteResult r;
    r.name = "monotone";
    auto systems = suite_systems();
    const int qs[] = {1, 2, 4};
    const MetricFamily families[] = {MetricFamily::Bowen, MetricFamily::Mean,
                                     MetricFamily::MaxMean, MetricFamily::FeldmanKatok};
    for (int t = 0; t < pairs; ++t) {
        const DynSystem& sys = systems[t % systems.size()];
        int q = qs[(t / systems.size()) % 3];
        int n = 1 + rng.below(n_max);
        Point x = random_point(sys, sys.word_length(), rng);
        Point y = random_point(sys, sys.word_length(), rng);

        for (MetricFamily fam : families) {
            MetricKind kind{fam, q};
            double d = orbit_distance(sys, x, y, n, kind);
            double probes[4];
            probes[0] = d > 0.0 ? d : 0x1.0p-40;  // membership flips exactly here
            probes[1] = std::nextafter(probes[0], 2.0);
            probes[2] = d > 0.0 ? 0.5 * d : 0x1.0p-41;
            probes[3] = 2.0 * d + 0.1;
            for (double radius : probes) {
                bool got = orbit_ball_contains(sys, x, y, n, radius, kind);
                bool want = d < radius;
                record(r, got == want, 1.0,
                       "%s membership at r=%.17g disagrees with distance %.17g (%s n=%d "
                       "q=%d)",
                       metric_family_name(fam), radius, d, sys.describe().c_str(), n, q);
            }
            // radius monotonicity
            double r1 = 0.05 + rng.uniform();
            double r2 = r1 + rng.uniform();
            bool m1 = orbit_ball_contains(sys, x, y, n, r1, kind);
            bool m2 = orbit_ball_contains(sys, x, y, n, r2, kind);
            record(r, !m1 || m2, 1.0, "%s ball shrank as radius grew %.17g -> %.17g",
                   metric_family_name(fam), r1, r2);
        }

        // ball inclusions at a shared radius
        double radius = 0.05 + rng.uniform();
        bool in_bowen =
            orbit_ball_contains(sys, x, y, n, radius, MetricKind{MetricFamily::Bowen, q});
        bool in_maxmean =
            orbit_ball_contains(sys, x, y, n, radius, MetricKind{MetricFamily::MaxMean, q});
        bool in_mean =
            orbit_ball_contains(sys, x, y, n, radius, MetricKind{MetricFamily::Mean, q});
        bool in_fk = orbit_ball_contains(sys, x, y, n, radius,
                                         MetricKind{MetricFamily::FeldmanKatok, q});
        record(r, !in_bowen || in_maxmean, 1.0, "bowen ball not inside maxmean (r=%.17g)",
               radius);
        record(r, !in_maxmean || in_mean, 1.0, "maxmean ball not inside mean (r=%.17g)",
               radius);
        record(r, !in_bowen || in_fk, 1.0, "bowen ball not inside fk (r=%.17g)", radius);
    }
    return r;
}

SuiteResult suite_birkhoff(int n_max, int pairs, Rng& rng, FaultMode fault) {
    SuiteResult r;
    r.name = "birkhoff";
    auto systems = suite_systems();
    const int qs[] = {1, 2, 4};
    for (int t = 0; t < pairs; ++t) {
        const DynSystem& sys = systems[t % systems.size()];
        int q = qs[(t / systems.size()) % 3];
        int n = 1 + rng.below(n_max);
        Point x = random_point(sys, sys.word_length(), rng);
        Potential phi = suite_potential(sys, t % 4, rng);

        double lib = birkhoff_sum(sys, phi, x, n, q);
        std::vector<Point> orbit = sys.orbit_segment(x, n, q);
        int terms = static_cast<int>(orbit.size());
        if (fault == FaultMode::DropTerm && terms > 1) --terms;
        double ref = 0.0;
        for (int i = 0; i < terms; ++i) ref += phi(sys, orbit[i]);
        record(r, std::fabs(lib - ref) <= 1e-9, std::fabs(lib - ref),
               "birkhoff sum %.17g != orbit-segment sum %.17g (%s n=%d q=%d)", lib, ref,
               sys.describe().c_str(), n, q);
    }
    return r;
}

SuiteResult suite_cover(int n_max, int pairs, Rng& rng) {
    SuiteResult r;
    r.name = "cover";
    auto systems = suite_systems();
    const MetricFamily families[] = {MetricFamily::Bowen, MetricFamily::Mean,
                                     MetricFamily::MaxMean, MetricFamily::FeldmanKatok};
    for (int t = 0; t < pairs; ++t) {
        const DynSystem& sys = systems[t % systems.size()];
        MetricKind kind{families[(t / systems.size()) % 4], 1 + t % 2};
        int n = 1 + rng.below(std::min(n_max, 4));
        int m = 3 + rng.below(10);

        EmpiricalMeasure mu;
        mu.provenance = "verify-cover";
        double prefix = 0.0;
        std::vector<double> raw(m);
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            mu.points.push_back(random_point(sys, sys.word_length(), rng));
            raw[i] = 0.05 + rng.uniform();
            total += raw[i];
        }
        for (int i = 0; i < m - 1; ++i) {
            mu.weights.push_back(raw[i] / total);
            prefix += mu.weights.back();
        }
        mu.weights.push_back(1.0 - prefix);

        double eps = 0.1 + 0.8 * rng.uniform();
        Potential phi = suite_potential(sys, t % 4, rng);
        CoverSolution greedy =
            covering_weight(sys, phi, mu, n, eps, kind, CoverMethod::Greedy);
        CoverSolution exact =
            covering_weight(sys, phi, mu, n, eps, kind, CoverMethod::ExactExhaustive);
        double bound = (1.0 + std::log(static_cast<double>(m))) * exact.total_weight;
        record(r, exact.total_weight <= greedy.total_weight + 1e-12,
               exact.total_weight - greedy.total_weight,
               "exact cover weight %.17g above greedy %.17g (m=%d)", exact.total_weight,
               greedy.total_weight, m);
        record(r, greedy.total_weight <= bound + 1e-9, greedy.total_weight - bound,
               "greedy weight %.17g above (1+ln m) bound %.17g (m=%d)", greedy.total_weight,
               bound, m);
        record(r, greedy.covered_mass > 1.0 - eps, (1.0 - eps) - greedy.covered_mass,
               "greedy cover mass %.17g below target %.17g", greedy.covered_mass, 1.0 - eps);
        record(r, exact.covered_mass > 1.0 - eps, (1.0 - eps) - exact.covered_mass,
               "exact cover mass %.17g below target %.17g", exact.covered_mass, 1.0 - eps);
    }
    return r;
}

}  // namespace

FaultMode parse_fault_mode(const std::string& name) {
    if (name.empty()) return FaultMode::None;
    if (name == "loose-match") return FaultMode::LooseMatch;
    if (name == "drop-term") return FaultMode::DropTerm;
    fail(ErrorCode::ConfigError,
         "unknown fault \"" + name + "\" (loose-match, drop-term)");
}

const std::vector<std::string>& all_verify_suites() {
    static const std::vector<std::string> names = {"chain",    "axioms",   "fk-oracle",
                                                   "monotone", "birkhoff", "cover"};
    return names;
}

std::vector<SuiteResult> run_verify_suites(const std::vector<std::string>& suites, int n_max,
                                           int pairs, uint64_t seed, FaultMode fault) {
    if (n_max < 1 || n_max > 64)
        fail(ErrorCode::ConfigError, "n_max must lie in [1,64]");
    if (pairs < 1) fail(ErrorCode::ConfigError, "pairs must be >= 1");

    // FNV-1a, not std::hash: the suite streams must not depend on the
    // standard library's hash choice.
    auto fnv = [](const std::string& s) {
        uint64_t h = 0xcbf29ce484222325ull;
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return h;
    };

    std::vector<SuiteResult> out;
    for (const std::string& name : suites) {
        Rng rng(seed ^ fnv(name));
        if (name == "chain")
            out.push_back(suite_chain(n_max, pairs, rng));
        else if (name == "axioms")
            out.push_back(suite_axioms(n_max, pairs, rng));
        else if (name == "fk-oracle")
            out.push_back(suite_fk_oracle(n_max, pairs, rng, fault));
        else if (name == "monotone")
            out.push_back(suite_monotone(n_max, pairs, rng));
        else if (name == "birkhoff")
            out.push_back(suite_birkhoff(n_max, pairs, rng, fault));
        else if (name == "cover")
            out.push_back(suite_cover(n_max, pairs, rng));
        else
            fail(ErrorCode::ConfigError, "unknown suite \"" + name + "\"");
    }
    return out;
}

}  // namespace orbp
