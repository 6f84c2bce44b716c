#include "orbp/estimators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <queue>
#include <set>

#include "orbp/batch.hpp"

namespace orbp {

const char* cover_method_name(CoverMethod method) {
    return method == CoverMethod::Greedy ? "greedy" : "exact";
}

const char* estimate_variant_name(EstimateVariant variant) {
    switch (variant) {
        case EstimateVariant::MeasureTheoretic: return "measure";
        case EstimateVariant::TopologicalCover: return "cover";
        case EstimateVariant::TopologicalSpanning: return "spanning";
    }
    return "unknown";
}

namespace {

// Exact gain of a candidate: mass of its still-uncovered points, summed in
// ascending point order so the value never depends on selection history.
double exact_gain(const std::vector<uint32_t>& covers, const std::vector<uint8_t>& covered,
                  const std::vector<double>& mass) {
    double g = 0.0;
    for (uint32_t j : covers)
        if (!covered[j]) g += mass[j];
    return g;
}

struct HeapEntry {
    double ratio;
    int idx;
    uint32_t version;
};

struct HeapOrder {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.ratio != b.ratio) return a.ratio > b.ratio;  // min-heap on ratio
        return a.idx > b.idx;                              // ties: lowest index
    }
};

// Greedy ratio-rule cover. Precondition (our only use): candidates are the
// target points themselves and the ball relation is symmetric, so cover[j]
// doubles as the list of balls containing point j. Lazy evaluation is sound
// because gains only shrink as coverage grows: a stale ratio is a lower
// bound, and an entry recomputed at the current version that still tops the
// heap is the true argmin.
CoverSolution run_greedy_cover(const std::vector<double>& penalties,
                               const std::vector<std::vector<uint32_t>>& cover,
                               const std::vector<double>& mass, double need_mass,
                               bool need_all) {
    const int m = static_cast<int>(cover.size());
    const int p = static_cast<int>(mass.size());

    std::vector<uint8_t> covered(p, 0);
    std::vector<uint8_t> chosen(m, 0);
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap;
    for (int c = 0; c < m; ++c) {
        double g = exact_gain(cover[c], covered, mass);
        if (g > 0.0) heap.push({penalties[c] / g, c, 0});
    }

    uint32_t version = 0;
    int uncovered = p;
    double running = 0.0;
    bool done = need_all ? uncovered == 0 : running > need_mass;
    while (!done) {
        if (heap.empty())
            fail(ErrorCode::Infeasible, "candidate balls cannot reach the cover target");
        HeapEntry top = heap.top();
        heap.pop();
        if (chosen[top.idx]) continue;
        if (top.version != version) {
            double g = exact_gain(cover[top.idx], covered, mass);
            if (g > 0.0) heap.push({penalties[top.idx] / g, top.idx, version});
            continue;
        }

        chosen[top.idx] = 1;
        ++version;
        for (uint32_t j : cover[top.idx]) {
            if (covered[j]) continue;
            covered[j] = 1;
            --uncovered;
            running += mass[j];
        }
        if (need_all) {
            done = uncovered == 0;
        } else if (running > need_mass) {
            // The running sum is order-of-selection arithmetic; confirm the
            // stop against the canonical index-order sum.
            double exact = 0.0;
            for (int j = 0; j < p; ++j)
                if (covered[j]) exact += mass[j];
            running = exact;
            done = exact > need_mass;
        }
    }

    CoverSolution sol;
    for (int c = 0; c < m; ++c)
        if (chosen[c]) sol.center_indices.push_back(c);
    sol.center_count = static_cast<double>(sol.center_indices.size());
    for (int c : sol.center_indices) sol.total_weight += penalties[c];
    if (need_all) {
        sol.covered_mass = 1.0;
    } else {
        double exact = 0.0;
        for (int j = 0; j < p; ++j)
            if (covered[j]) exact += mass[j];
        sol.covered_mass = exact;
        if (!(sol.covered_mass > need_mass))
            fail(ErrorCode::Infeasible, "greedy cover fell short of its mass target");
    }
    return sol;
}

CoverSolution run_exact_cover(const std::vector<double>& penalties,
                              const std::vector<std::vector<uint32_t>>& cover,
                              const std::vector<double>& mass, double need_mass,
                              bool need_all) {
    const int m = static_cast<int>(cover.size());
    const int p = static_cast<int>(mass.size());
    if (m > kExactCoverLimit || p > kExactCoverLimit)
        fail(ErrorCode::ExactTooLarge, "exhaustive cover accepts at most " +
                                           std::to_string(kExactCoverLimit) + " candidates");

    const uint32_t full = (1u << p) - 1;
    std::vector<uint32_t> ball(m, 0);
    for (int c = 0; c < m; ++c)
        for (uint32_t j : cover[c]) ball[c] |= 1u << j;

    std::vector<double> msum(size_t{1} << p, 0.0);
    for (size_t s = 1; s < msum.size(); ++s) {
        size_t low = s & (~s + 1);
        msum[s] = msum[s ^ low] + mass[std::countr_zero(static_cast<uint32_t>(low))];
    }

    const size_t total = size_t{1} << m;
    std::vector<uint32_t> uni(total, 0);
    std::vector<double> wsum(total, 0.0);
    size_t best = 0;
    bool have = false;
    for (size_t s = 1; s < total; ++s) {
        size_t low = s & (~s + 1);
        int c = std::countr_zero(static_cast<uint32_t>(low));
        uni[s] = uni[s ^ low] | ball[c];
        wsum[s] = wsum[s ^ low] + penalties[c];
        bool feasible = need_all ? uni[s] == full : msum[uni[s]] > need_mass;
        if (feasible && (!have || wsum[s] < wsum[best])) {
            best = s;
            have = true;
        }
    }
    if (!have) fail(ErrorCode::Infeasible, "no candidate subset reaches the cover target");

    CoverSolution sol;
    sol.method = CoverMethod::ExactExhaustive;
    for (int c = 0; c < m; ++c)
        if (best & (size_t{1} << c)) sol.center_indices.push_back(c);
    sol.center_count = static_cast<double>(sol.center_indices.size());
    for (int c : sol.center_indices) sol.total_weight += penalties[c];
    if (need_all) {
        sol.covered_mass = 1.0;
    } else {
        double exact = 0.0;
        for (int j = 0; j < p; ++j)
            if (uni[best] & (1u << j)) exact += mass[j];
        sol.covered_mass = exact;
    }
    return sol;
}

std::vector<double> center_penalties(const DynSystem& system, const Potential& phi,
                                     const std::vector<Point>& candidates, int n, int q) {
    std::vector<double> pen(candidates.size(), 1.0);
    if (phi.is_zero()) return pen;
    for (size_t i = 0; i < candidates.size(); ++i)
        pen[i] = std::exp(birkhoff_sum(system, phi, candidates[i], n, q));
    return pen;
}

CoverSolution solve_cover(const DynSystem& system, const Potential& phi,
                          const std::vector<Point>& candidates,
                          const std::vector<double>& mass, int n, double eps,
                          const MetricKind& kind, CoverMethod method, bool need_all) {
    auto lists = coverage_lists(system, candidates, n, eps, kind);
    auto pen = center_penalties(system, phi, candidates, n, kind.q);
    double need_mass = need_all ? 1.0 : 1.0 - eps;
    CoverSolution sol = method == CoverMethod::Greedy
                            ? run_greedy_cover(pen, lists, mass, need_mass, need_all)
                            : run_exact_cover(pen, lists, mass, need_mass, need_all);
    sol.method = method;
    return sol;
}

void check_eps(double eps) {
    if (!(eps > 0.0) || !(eps < 1.0)) fail(ErrorCode::ConfigError, "eps must lie in (0,1)");
}

void check_n(int n) {
    if (n < 1) fail(ErrorCode::ConfigError, "n must be >= 1");
}

void check_kind(const MetricKind& kind) {
    if (kind.q < 1) fail(ErrorCode::ConfigError, "q must be >= 1");
}

PressureEstimate from_solution(const CoverSolution& sol, int n, double eps,
                               const MetricKind& kind, EstimateVariant variant) {
    PressureEstimate est;
    est.value = std::log(sol.total_weight) / n;
    est.n = n;
    est.eps = eps;
    est.kind = kind;
    est.variant = variant;
    est.centers = sol.center_count;
    est.covered_mass = sol.covered_mass;
    return est;
}

// The topological fast path: on the built-in cylinder grid the eps-balls of
// the Bowen metric at q = 1 are singletons (distinct grid words differ by
// at least 2^-(depth-1) >= eps in d_n), so the unique minimal cover takes
// every grid word and its weight has the closed transfer-matrix form. The
// FK metric coincides with Bowen when eps <= 1/n (a single missed index
// already costs 1/n), so it shares the path.
bool cylinder_path_applies(const DynSystem& system, int n, double eps,
                           const MetricKind& kind) {
    if (!system.symbolic() || kind.q != 1) return false;
    if (kind.family == MetricFamily::Bowen) return true;
    return kind.family == MetricFamily::FeldmanKatok && min_match_size(n, eps) == n;
}

int grid_word_length(const DynSystem& system, int n, double eps, int q) {
    int len = (n - 1) * q + resolving_depth(eps);
    if (len > system.word_length())
        fail(ErrorCode::HorizonExhausted,
             "grid words need " + std::to_string(len) + " symbols, horizon is " +
                 std::to_string(system.word_length()));
    return len;
}

double phi_integral(const DynSystem& system, const MeasureSpec& spec, const Potential& phi) {
    double c = 0.0;
    if (phi.constant_value(c)) return c;
    if (system.symbolic()) {
        const std::vector<double>& w =
            spec.kind() == MeasureKind::Bernoulli ? spec.probs() : spec.stationary();
        double total = 0.0;
        for (size_t a = 0; a < w.size(); ++a)
            total += w[a] * phi.symbol_value(static_cast<uint8_t>(a));
        return total;
    }
    return phi.mean_on_circle();
}

}  // namespace

CoverSolution covering_weight(const DynSystem& system, const Potential& phi,
                              const EmpiricalMeasure& mu, int n, double eps,
                              const MetricKind& kind, CoverMethod method) {
    check_n(n);
    check_eps(eps);
    check_kind(kind);
    mu.validate(system);
    return solve_cover(system, phi, mu.points, mu.weights, n, eps, kind, method, false);
}

PressureEstimate measure_pressure_estimate(const DynSystem& system, const Potential& phi,
                                           const EmpiricalMeasure& mu, int n, double eps,
                                           const MetricKind& kind, CoverMethod method) {
    CoverSolution sol = covering_weight(system, phi, mu, n, eps, kind, method);
    return from_solution(sol, n, eps, kind, EstimateVariant::MeasureTheoretic);
}

PressureEstimate inf_over_q_measure(const DynSystem& system, const Potential& phi,
                                    const EmpiricalMeasure& mu, int n, double eps,
                                    MetricFamily family, int q_max, CoverMethod method) {
    if (q_max < 1) fail(ErrorCode::ConfigError, "q_max must be >= 1");
    PressureEstimate best;
    std::vector<std::pair<int, double>> per_q;
    for (int q = 1; q <= q_max; ++q) {
        PressureEstimate est =
            measure_pressure_estimate(system, phi, mu, n, eps, MetricKind{family, q}, method);
        per_q.emplace_back(q, est.value);
        if (q == 1 || est.value < best.value) best = est;
    }
    best.per_q = std::move(per_q);
    return best;
}

std::vector<Point> enumerate_admissible_words(const DynSystem& system, int length, int cap) {
    if (!system.symbolic())
        fail(ErrorCode::KindMismatch, "word enumeration needs a shift system");
    if (length < 1) fail(ErrorCode::ConfigError, "word length must be positive");
    double count = cylinder_weight_sum(system, Potential::zero(), length, 1);
    if (count > cap) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "admissible grid has %.0f words, cap is %d", count,
                      cap);
        fail(ErrorCode::ConfigError, buf);
    }

    const int k = system.alphabet();
    std::vector<Point> out;
    out.reserve(static_cast<size_t>(count));
    std::vector<uint8_t> w(length);
    auto rec = [&](auto&& self, int pos) -> void {
        for (int a = 0; a < k; ++a) {
            if (pos > 0 && !system.allowed(w[pos - 1], a)) continue;
            w[pos] = static_cast<uint8_t>(a);
            if (pos + 1 == length)
                out.push_back(Point::word(w));
            else
                self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<Point> uniform_circle_grid(double eps) {
    check_eps(eps);
    int k = static_cast<int>(std::ceil(2.0 / eps));
    std::vector<Point> grid;
    grid.reserve(k);
    for (int i = 0; i < k; ++i)
        grid.push_back(Point::circle_ticks(
            static_cast<uint32_t>((static_cast<uint64_t>(i) << 32) / k)));
    return grid;
}

double cylinder_weight_sum(const DynSystem& system, const Potential& phi, int length, int n) {
    if (!system.symbolic())
        fail(ErrorCode::KindMismatch, "cylinder sums need a shift system");
    if (n < 1 || length < n)
        fail(ErrorCode::ConfigError, "cylinder sum needs length >= n >= 1");

    const int k = system.alphabet();
    std::vector<double> cur(k), next(k);
    for (int a = 0; a < k; ++a)
        cur[a] = std::exp(phi.symbol_value(static_cast<uint8_t>(a)));
    for (int i = 1; i < length; ++i) {
        for (int b = 0; b < k; ++b) {
            double acc = 0.0;
            for (int a = 0; a < k; ++a)
                if (system.allowed(a, b)) acc += cur[a];
            next[b] = i < n ? acc * std::exp(phi.symbol_value(static_cast<uint8_t>(b))) : acc;
        }
        cur.swap(next);
    }
    double total = 0.0;
    for (int a = 0; a < k; ++a) total += cur[a];
    if (!std::isfinite(total))
        fail(ErrorCode::ConfigError, "cylinder weight sum overflows double");
    return total;
}

CoverSolution topological_cover_weight(const DynSystem& system, const Potential& phi, int n,
                                       double eps, const MetricKind& kind,
                                       CoverMethod method) {
    check_n(n);
    check_eps(eps);
    check_kind(kind);

    if (system.symbolic()) {
        int len = grid_word_length(system, n, eps, kind.q);
        if (cylinder_path_applies(system, n, eps, kind)) {
            CoverSolution sol;
            sol.method = method;
            sol.total_weight = cylinder_weight_sum(system, phi, len, n);
            sol.center_count = cylinder_weight_sum(system, Potential::zero(), len, 1);
            sol.covered_mass = 1.0;
            return sol;
        }
        std::vector<Point> grid = enumerate_admissible_words(system, len, kMaxMaterializedGrid);
        std::vector<double> mass(grid.size(), 1.0 / static_cast<double>(grid.size()));
        return solve_cover(system, phi, grid, mass, n, eps, kind, method, true);
    }

    std::vector<Point> grid = uniform_circle_grid(eps);
    std::vector<double> mass(grid.size(), 1.0 / static_cast<double>(grid.size()));
    return solve_cover(system, phi, grid, mass, n, eps, kind, method, true);
}

CoverSolution topological_cover_weight_on_grid(const DynSystem& system, const Potential& phi,
                                               int n, double eps, const MetricKind& kind,
                                               const std::vector<Point>& grid,
                                               CoverMethod method) {
    check_n(n);
    check_eps(eps);
    check_kind(kind);
    if (grid.empty()) fail(ErrorCode::ConfigError, "empty grid");
    if (static_cast<int>(grid.size()) > kMaxMaterializedGrid)
        fail(ErrorCode::ConfigError, "grid larger than the materialized-cover cap");
    for (const Point& g : grid) system.check_point(g);

    if (system.symbolic()) {
        // eps/2-density on a shift means: every admissible word of the
        // resolving length appears as a prefix of some grid word.
        size_t len = static_cast<size_t>(grid_word_length(system, n, eps, kind.q));
        std::set<std::vector<uint8_t>> prefixes;
        for (const Point& g : grid) {
            if (g.symbols().size() < len)
                fail(ErrorCode::GridTooCoarse, "grid word shorter than the resolving length");
            prefixes.insert(
                std::vector<uint8_t>(g.symbols().begin(), g.symbols().begin() + len));
        }
        double want = cylinder_weight_sum(system, Potential::zero(), static_cast<int>(len), 1);
        if (static_cast<double>(prefixes.size()) != want)
            fail(ErrorCode::GridTooCoarse, "grid misses admissible cylinders");
    } else {
        std::vector<uint32_t> ticks;
        ticks.reserve(grid.size());
        for (const Point& g : grid) ticks.push_back(g.ticks());
        std::sort(ticks.begin(), ticks.end());
        uint64_t worst = (static_cast<uint64_t>(ticks.front()) + (uint64_t{1} << 32)) -
                         ticks.back();  // wraparound gap
        for (size_t i = 1; i < ticks.size(); ++i)
            worst = std::max(worst, static_cast<uint64_t>(ticks[i]) - ticks[i - 1]);
        // one lattice tick of slack: the built-in grid rounds to ticks
        if (static_cast<double>(worst) * 0x1.0p-32 > eps / 2 + 0x1.0p-31)
            fail(ErrorCode::GridTooCoarse, "circle grid mesh exceeds eps/2");
    }

    std::vector<double> mass(grid.size(), 1.0 / static_cast<double>(grid.size()));
    return solve_cover(system, phi, grid, mass, n, eps, kind, method, true);
}

PressureEstimate topological_pressure_estimate(const DynSystem& system, const Potential& phi,
                                               int n, double eps, const MetricKind& kind,
                                               CoverMethod method) {
    CoverSolution sol = topological_cover_weight(system, phi, n, eps, kind, method);
    return from_solution(sol, n, eps, kind, EstimateVariant::TopologicalCover);
}

PressureEstimate spanning_pressure(const DynSystem& system, const Potential& phi, int n,
                                   double eps, CoverMethod method) {
    MetricKind kind{MetricFamily::Bowen, 1};
    CoverSolution sol = topological_cover_weight(system, phi, n, eps, kind, method);
    return from_solution(sol, n, eps, kind, EstimateVariant::TopologicalSpanning);
}

PressureEstimate spanning_pressure_on_grid(const DynSystem& system, const Potential& phi,
                                           int n, double eps, const std::vector<Point>& grid,
                                           CoverMethod method) {
    MetricKind kind{MetricFamily::Bowen, 1};
    CoverSolution sol = topological_cover_weight_on_grid(system, phi, n, eps, kind, grid, method);
    return from_solution(sol, n, eps, kind, EstimateVariant::TopologicalSpanning);
}

PressureEstimate inf_over_q_topological(const DynSystem& system, const Potential& phi, int n,
                                        double eps, MetricFamily family, int q_max,
                                        CoverMethod method) {
    if (q_max < 1) fail(ErrorCode::ConfigError, "q_max must be >= 1");
    PressureEstimate best;
    std::vector<std::pair<int, double>> per_q;
    for (int q = 1; q <= q_max; ++q) {
        PressureEstimate est =
            topological_pressure_estimate(system, phi, n, eps, MetricKind{family, q}, method);
        per_q.emplace_back(q, est.value);
        if (q == 1 || est.value < best.value) best = est;
    }
    best.per_q = std::move(per_q);
    return best;
}

double exact_shift_pressure(int k, const std::vector<std::vector<int>>& transitions,
                            const std::vector<double>& phi_table) {
    if (k < 2 || k > 255) fail(ErrorCode::ConfigError, "alphabet size must be in [2,255]");
    std::vector<double> phi(phi_table);
    if (phi.empty()) phi.assign(k, 0.0);
    if (static_cast<int>(phi.size()) != k)
        fail(ErrorCode::ConfigError, "potential table size must match the alphabet");

    if (transitions.empty()) {
        double total = 0.0;
        for (int a = 0; a < k; ++a) total += std::exp(phi[a]);
        return std::log(total);
    }

    if (static_cast<int>(transitions.size()) != k)
        fail(ErrorCode::ConfigError, "transition matrix must be k x k");
    for (const auto& row : transitions) {
        if (static_cast<int>(row.size()) != k)
            fail(ErrorCode::ConfigError, "transition matrix must be k x k");
        bool any = false;
        for (int v : row) {
            if (v != 0 && v != 1) fail(ErrorCode::ConfigError, "transitions must be 0/1");
            any = any || v == 1;
        }
        if (!any) fail(ErrorCode::ConfigError, "transition matrix row has no successor");
    }

    // Power iteration on M = diag(e^phi) A with the Collatz-Wielandt bracket
    // min_a (Mv)_a/v_a <= lambda_max <= max_a (Mv)_a/v_a. The deliberately
    // asymmetric start keeps periodic matrices oscillating so they are
    // reported instead of accidentally fixed.
    std::vector<double> v(k), w(k);
    for (int a = 0; a < k; ++a) v[a] = a + 1.0;
    for (int it = 0; it < 200000; ++it) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0, norm = 0.0;
        for (int a = 0; a < k; ++a) {
            double acc = 0.0;
            for (int b = 0; b < k; ++b)
                if (transitions[a][b]) acc += v[b];
            w[a] = std::exp(phi[a]) * acc;
            lo = std::min(lo, w[a] / v[a]);
            hi = std::max(hi, w[a] / v[a]);
            norm += w[a];
        }
        for (int a = 0; a < k; ++a) v[a] = w[a] / norm;
        if (hi - lo <= 1e-12 * hi) return std::log(0.5 * (lo + hi));
    }
    fail(ErrorCode::NotPrimitive, "power iteration did not converge to 1e-10");
}

double exact_topological_pressure(const DynSystem& system, const Potential& phi) {
    if (system.symbolic()) {
        int k = system.alphabet();
        std::vector<double> table(k);
        for (int a = 0; a < k; ++a) table[a] = phi.symbol_value(static_cast<uint8_t>(a));
        std::vector<std::vector<int>> transitions;
        if (system.kind() == SystemKind::Sft) {
            transitions.assign(k, std::vector<int>(k, 0));
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) transitions[a][b] = system.allowed(a, b) ? 1 : 0;
        }
        return exact_shift_pressure(k, transitions, table);
    }
    if (system.kind() == SystemKind::Doubling) {
        double c = 0.0;
        if (phi.constant_value(c)) return std::log(2.0) + c;
        return std::numeric_limits<double>::quiet_NaN();
    }
    // Irrational rotations are uniquely ergodic: pressure is the Lebesgue
    // average of the potential.
    return phi.mean_on_circle();
}

double exact_measure_pressure(const DynSystem& system, const MeasureSpec& spec,
                              const Potential& phi) {
    spec.require_compatible(system);
    double h = 0.0;
    switch (spec.kind()) {
        case MeasureKind::Bernoulli:
            for (double pr : spec.probs())
                if (pr > 0.0) h -= pr * std::log(pr);
            break;
        case MeasureKind::Markov: {
            const auto& pi = spec.stationary();
            for (size_t a = 0; a < pi.size(); ++a)
                for (double pr : spec.row(static_cast<int>(a)))
                    if (pr > 0.0) h -= pi[a] * pr * std::log(pr);
            break;
        }
        case MeasureKind::Lebesgue:
            h = system.kind() == SystemKind::Doubling ? std::log(2.0) : 0.0;
            break;
    }
    return h + phi_integral(system, spec, phi);
}

BrinKatokSummary brin_katok_profile(const EmpiricalMeasure& mu, const DynSystem& system,
                                    const std::vector<Point>& centers, double radius, int n,
                                    const MetricKind& kind) {
    check_n(n);
    check_kind(kind);
    if (!(radius > 0.0)) fail(ErrorCode::ConfigError, "radius must be positive");
    if (centers.empty()) fail(ErrorCode::ConfigError, "no centers");
    mu.validate(system);

    BrinKatokSummary out;
    for (const Point& c : centers) {
        double mass = ball_mass(mu, system, c, radius, n, kind);
        if (mass <= 0.0) {
            ++out.empty_balls;
            continue;
        }
        out.values.push_back(-std::log(mass) / n);
    }
    if (out.values.empty()) return out;

    std::vector<double> sorted(out.values);
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double prob) {
        double h = prob * (sorted.size() - 1);
        size_t lo = static_cast<size_t>(h);
        if (lo + 1 >= sorted.size()) return sorted.back();
        return sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo]);
    };
    out.q25 = quantile(0.25);
    out.median = quantile(0.5);
    out.q75 = quantile(0.75);
    return out;
}

ConvergenceTable convergence_table(const DynSystem& system, const Potential& phi,
                                   const EmpiricalMeasure* mu, const TableSpec& spec,
                                   double oracle) {
    if (spec.kinds.empty() || spec.ns.empty() || spec.epss.empty())
        fail(ErrorCode::ConfigError, "table needs nonempty kind, n and eps lists");
    for (int n : spec.ns) check_n(n);
    for (double eps : spec.epss) check_eps(eps);
    for (const MetricKind& kind : spec.kinds) {
        check_kind(kind);
        if (spec.variant == EstimateVariant::TopologicalSpanning &&
            (kind.family != MetricFamily::Bowen || kind.q != 1))
            fail(ErrorCode::ConfigError, "spanning pressure uses the Bowen metric at q = 1");
    }
    if (spec.variant == EstimateVariant::MeasureTheoretic) {
        if (mu == nullptr)
            fail(ErrorCode::ConfigError, "measure-theoretic table needs a sample");
        mu->validate(system);
    }

    // canonical cell order: (family, q, eps, n), each ascending, deduplicated
    std::vector<MetricKind> kinds(spec.kinds);
    std::sort(kinds.begin(), kinds.end(), [](const MetricKind& a, const MetricKind& b) {
        if (a.family != b.family) return static_cast<int>(a.family) < static_cast<int>(b.family);
        return a.q < b.q;
    });
    kinds.erase(std::unique(kinds.begin(), kinds.end(),
                            [](const MetricKind& a, const MetricKind& b) {
                                return a.family == b.family && a.q == b.q;
                            }),
                kinds.end());
    std::vector<int> ns(spec.ns);
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    std::vector<double> epss(spec.epss);
    std::sort(epss.begin(), epss.end());
    epss.erase(std::unique(epss.begin(), epss.end()), epss.end());

    ConvergenceTable table;
    table.oracle = oracle;
    for (const MetricKind& kind : kinds) {
        for (double eps : epss) {
            for (int n : ns) {
                TableCell cell;
                cell.kind = kind;
                cell.n = n;
                cell.eps = eps;
                try {
                    switch (spec.variant) {
                        case EstimateVariant::MeasureTheoretic:
                            cell.estimate = measure_pressure_estimate(system, phi, *mu, n,
                                                                      eps, kind, spec.method);
                            break;
                        case EstimateVariant::TopologicalCover:
                            cell.estimate = topological_pressure_estimate(system, phi, n, eps,
                                                                          kind, spec.method);
                            break;
                        case EstimateVariant::TopologicalSpanning:
                            cell.estimate =
                                spanning_pressure(system, phi, n, eps, spec.method);
                            break;
                    }
                } catch (const Error& e) {
                    cell.status = error_code_name(e.code());
                    cell.estimate = PressureEstimate{};
                    cell.estimate.value = std::numeric_limits<double>::quiet_NaN();
                    cell.estimate.n = n;
                    cell.estimate.eps = eps;
                    cell.estimate.kind = kind;
                }
                table.cells.push_back(std::move(cell));
            }

            TableSummaryRow row;
            row.kind = kind;
            row.eps = eps;
            std::vector<std::pair<int, double>> ok;
            for (const TableCell& cell : table.cells)
                if (cell.status == "ok" && cell.kind.family == kind.family &&
                    cell.kind.q == kind.q && cell.eps == eps)
                    ok.emplace_back(cell.n, cell.estimate.value);
            row.cells_ok = static_cast<int>(ok.size());
            if (!ok.empty()) {
                row.stabilized = ok.size() == 1
                                     ? ok.back().second
                                     : 0.5 * (ok.back().second + ok[ok.size() - 2].second);
                if (ok.size() >= 2) {
                    auto [n1, v1] = ok[ok.size() - 2];
                    auto [n2, v2] = ok.back();
                    row.extrapolated = (n2 * v2 - n1 * v1) / (n2 - n1);
                }
            }
            table.summary.push_back(row);
        }
    }
    return table;
}

}  // namespace orbp
