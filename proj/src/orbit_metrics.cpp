#include "orbp/orbit_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace orbp {

namespace {

constexpr int kMaxMatchHorizon = 256;  // DP buffers below are sized for this

struct SymbolicPair {
    const uint8_t* a;
    size_t la;
    const uint8_t* b;
    size_t lb;
    int q;
};

// Distance between the suffixes a[ia..] and b[ib..]: 2^-t at the first
// disagreement, 0 when they agree over the whole compared stretch.
double sym_distance(const SymbolicPair& p, size_t ia, size_t ib) {
    size_t m = std::min(p.la - ia, p.lb - ib);
    for (size_t t = 0; t < m; ++t)
        if (p.a[ia + t] != p.b[ib + t]) return std::ldexp(1.0, -static_cast<int>(t));
    return 0.0;
}

void require_pair(const DynSystem& system, const Point& x, const Point& y, int n, int q) {
    system.check_point(x);
    system.check_point(y);
    if (n < 1 || q < 1) fail(ErrorCode::ConfigError, "orbit metrics need n >= 1 and q >= 1");
    if (system.symbolic()) {
        size_t need = static_cast<size_t>(n - 1) * q;
        if (need >= x.symbols().size() || need >= y.symbols().size())
            fail(ErrorCode::HorizonExhausted, "orbit window exceeds the sampled word");
    }
}

SymbolicPair make_pair(const Point& x, const Point& y, int q) {
    return SymbolicPair{x.symbols().data(), x.symbols().size(), y.symbols().data(),
                        y.symbols().size(), q};
}

// Full n x n grid of base distances d(T^{qi} x, T^{qj} y), row-major in i.
std::vector<double> build_grid(const DynSystem& system, const Point& x, const Point& y, int n,
                               int q) {
    std::vector<double> grid(static_cast<size_t>(n) * n);
    if (system.symbolic()) {
        SymbolicPair p = make_pair(x, y, q);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                grid[static_cast<size_t>(i) * n + j] =
                    sym_distance(p, static_cast<size_t>(i) * q, static_cast<size_t>(j) * q);
    } else {
        std::vector<uint32_t> ox(n), oy(n);
        uint32_t tx = x.ticks(), ty = y.ticks();
        for (int i = 0; i < n; ++i) {
            ox[i] = tx;
            oy[i] = ty;
            for (int s = 0; s < q; ++s) {
                tx = system.step_ticks(tx);
                ty = system.step_ticks(ty);
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                grid[static_cast<size_t>(i) * n + j] = circle_tick_distance(ox[i], oy[j]);
    }
    return grid;
}

// Largest order-preserving matching over the grid under pred (a longest
// common subsequence on the boolean match matrix). Rolling rows.
template <class Pred>
int lcs_size(const double* grid, int n, Pred pred) {
    uint16_t rows[2][kMaxMatchHorizon + 1];
    std::memset(rows[0], 0, sizeof(uint16_t) * (n + 1));
    for (int i = 0; i < n; ++i) {
        const uint16_t* prev = rows[i & 1];
        uint16_t* cur = rows[(i & 1) ^ 1];
        cur[0] = 0;
        const double* row = grid + static_cast<size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            uint16_t best = pred(row[j]) ? static_cast<uint16_t>(prev[j] + 1)
                                          : std::max(prev[j + 1], cur[j]);
            cur[j + 1] = best;
        }
    }
    return rows[n & 1][n];
}

int lcs_leq(const double* grid, int n, double t) {
    return lcs_size(grid, n, [t](double d) { return d <= t; });
}

int lcs_strict(const double* grid, int n, double t) {
    return lcs_size(grid, n, [t](double d) { return d < t; });
}

double fk_from_grid(const std::vector<double>& grid, int n, FkPolicy policy) {
    std::vector<double> vals(grid);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

    // tau[m]: cheapest bottleneck of a size-m matching = the smallest grid
    // value t with lcs_leq(t) >= m. lcs_leq is monotone in t, so both
    // policies recover the same thresholds.
    std::vector<double> tau(static_cast<size_t>(n) + 1, 0.0);
    if (policy == FkPolicy::Sweep) {
        int reached = 0;
        for (double t : vals) {
            int s = lcs_leq(grid.data(), n, t);
            for (int m = reached + 1; m <= s; ++m) tau[m] = t;
            reached = std::max(reached, s);
            if (reached == n) break;
        }
    } else {
        for (int m = 1; m <= n; ++m) {
            size_t lo = 0, hi = vals.size() - 1;
            while (lo < hi) {
                size_t mid = (lo + hi) / 2;
                if (lcs_leq(grid.data(), n, vals[mid]) >= m)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            tau[m] = vals[lo];
        }
    }

    double best = match_defect(n, 0);  // the empty matching: max(0, 1)
    for (int m = 1; m <= n; ++m)
        best = std::min(best, std::max(tau[m], match_defect(n, m)));
    return best;
}

bool bowen_contains(const DynSystem& system, const Point& x, const Point& y, int n, int q,
                    double radius) {
    if (system.symbolic()) {
        SymbolicPair p = make_pair(x, y, q);
        for (int i = 0; i < n; ++i) {
            size_t off = static_cast<size_t>(i) * q;
            if (sym_distance(p, off, off) >= radius) return false;
        }
        return true;
    }
    uint32_t tx = x.ticks(), ty = y.ticks();
    for (int i = 0; i < n; ++i) {
        if (circle_tick_distance(tx, ty) >= radius) return false;
        for (int s = 0; s < q; ++s) {
            tx = system.step_ticks(tx);
            ty = system.step_ticks(ty);
        }
    }
    return true;
}

// Mean membership must reproduce mean_distance(...) < radius bitwise, so the
// running sum accumulates in the same ascending order; the early exit is
// sound because adding nonnegative terms never shrinks a rounded sum.
bool mean_contains(const DynSystem& system, const Point& x, const Point& y, int n, int q,
                   double radius) {
    double sum = 0.0;
    if (system.symbolic()) {
        SymbolicPair p = make_pair(x, y, q);
        for (int i = 0; i < n; ++i) {
            size_t off = static_cast<size_t>(i) * q;
            sum += sym_distance(p, off, off);
            if (sum / n >= radius) return false;
        }
    } else {
        uint32_t tx = x.ticks(), ty = y.ticks();
        for (int i = 0; i < n; ++i) {
            sum += circle_tick_distance(tx, ty);
            if (sum / n >= radius) return false;
            for (int s = 0; s < q; ++s) {
                tx = system.step_ticks(tx);
                ty = system.step_ticks(ty);
            }
        }
    }
    return sum / n < radius;
}

bool maxmean_contains(const DynSystem& system, const Point& x, const Point& y, int n, int q,
                      double radius) {
    double sum = 0.0;
    if (system.symbolic()) {
        SymbolicPair p = make_pair(x, y, q);
        for (int i = 0; i < n; ++i) {
            size_t off = static_cast<size_t>(i) * q;
            sum += sym_distance(p, off, off);
            if (sum / (i + 1) >= radius) return false;
        }
    } else {
        uint32_t tx = x.ticks(), ty = y.ticks();
        for (int i = 0; i < n; ++i) {
            sum += circle_tick_distance(tx, ty);
            if (sum / (i + 1) >= radius) return false;
            for (int s = 0; s < q; ++s) {
                tx = system.step_ticks(tx);
                ty = system.step_ticks(ty);
            }
        }
    }
    return true;
}

// Rotation orbits are rigid: grid entry (i,j) depends only on the shift
// s = i - j, through c_s = d(x + s q alpha, y). One shift s with c_s <
// radius already witnesses the matching {(i, i-s)} of size n - |s|, and the
// converse holds too: every matched pair needs its own shift below radius,
// and if all such shifts have |s| > n - mmin then the first pair starts at
// index > n - mmin in x or in y, capping any order-preserving matching
// strictly below mmin. Membership therefore reduces to scanning the profile
// over |s| <= n - mmin. Tick arithmetic keeps c_s exact.
bool fk_contains_rotation(const DynSystem& system, const Point& x, const Point& y, int n,
                          int q, double radius, int mmin) {
    uint32_t qa = 0;
    for (int s = 0; s < q; ++s) qa += system.alpha_ticks();
    uint32_t tx = x.ticks(), ty = y.ticks();
    int max_shift = n - mmin;
    for (int s = -max_shift; s <= max_shift; ++s)
        if (circle_tick_distance(tx + static_cast<uint32_t>(s) * qa, ty) < radius)
            return true;
    return false;
}

bool fk_contains(const DynSystem& system, const Point& x, const Point& y, int n, int q,
                 double radius) {
    if (n > kMaxMatchHorizon)
        fail(ErrorCode::ConfigError, "matching horizon capped at 256");
    int mmin = min_match_size(n, radius);
    if (mmin == 0) return true;  // radius above 1, every pair is inside
    // Bowen ball sits inside the FK ball; with a forced full match they agree.
    if (bowen_contains(system, x, y, n, q, radius)) return true;
    if (mmin >= n) return false;
    if (system.kind() == SystemKind::Rotation)
        return fk_contains_rotation(system, x, y, n, q, radius, mmin);
    std::vector<double> grid = build_grid(system, x, y, n, q);
    return lcs_strict(grid.data(), n, radius) >= mmin;
}

}  // namespace

const char* metric_family_name(MetricFamily family) {
    switch (family) {
        case MetricFamily::Bowen: return "bowen";
        case MetricFamily::Mean: return "mean";
        case MetricFamily::MaxMean: return "maxmean";
        case MetricFamily::FeldmanKatok: return "fk";
    }
    return "unknown";
}

double match_defect(int n, int m) { return static_cast<double>(n - m) / n; }

int min_match_size(int n, double radius) {
    if (!(radius > 0.0)) fail(ErrorCode::ConfigError, "radius must be positive");
    int lo = 0, hi = n;  // defect(n,n) = 0 < radius always
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (match_defect(n, mid) < radius)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

double bowen_distance(const DynSystem& system, const Point& x, const Point& y, int n, int q) {
    require_pair(system, x, y, n, q);
    double best = 0.0;
    if (system.symbolic()) {
        SymbolicPair p = make_pair(x, y, q);
        for (int i = 0; i < n; ++i) {
            size_t off = static_cast<size_t>(i) * q;
            best = std::max(best, sym_distance(p, off, off));
        }
    } else {
        uint32_t tx = x.ticks(), ty = y.ticks();
        for (int i = 0; i < n; ++i) {
            best = std::max(best, circle_tick_distance(tx, ty));
            for (int s = 0; s < q; ++s) {
                tx = system.step_ticks(tx);
                ty = system.step_ticks(ty);
            }
        }
    }
    return best;
}

double mean_distance(const DynSystem& system, const Point& x, const Point& y, int n, int q) {
    require_pair(system, x, y, n, q);
    double sum = 0.0;
    if (system.symbolic()) {
        SymbolicPair p = make_pair(x, y, q);
        for (int i = 0; i < n; ++i) {
            size_t off = static_cast<size_t>(i) * q;
            sum += sym_distance(p, off, off);
        }
    } else {
        uint32_t tx = x.ticks(), ty = y.ticks();
        for (int i = 0; i < n; ++i) {
            sum += circle_tick_distance(tx, ty);
            for (int s = 0; s < q; ++s) {
                tx = system.step_ticks(tx);
                ty = system.step_ticks(ty);
            }
        }
    }
    return sum / n;
}

double maxmean_distance(const DynSystem& system, const Point& x, const Point& y, int n,
                        int q) {
    require_pair(system, x, y, n, q);
    double sum = 0.0, best = 0.0;
    if (system.symbolic()) {
        SymbolicPair p = make_pair(x, y, q);
        for (int i = 0; i < n; ++i) {
            size_t off = static_cast<size_t>(i) * q;
            sum += sym_distance(p, off, off);
            best = std::max(best, sum / (i + 1));
        }
    } else {
        uint32_t tx = x.ticks(), ty = y.ticks();
        for (int i = 0; i < n; ++i) {
            sum += circle_tick_distance(tx, ty);
            best = std::max(best, sum / (i + 1));
            for (int s = 0; s < q; ++s) {
                tx = system.step_ticks(tx);
                ty = system.step_ticks(ty);
            }
        }
    }
    return best;
}

MatchResult match_value(const DynSystem& system, const Point& x, const Point& y,
                        const MatchParams& params) {
    int n = params.n, q = params.q;
    require_pair(system, x, y, n, q);
    if (n > kMaxMatchHorizon) fail(ErrorCode::ConfigError, "matching horizon capped at 256");
    if (!(params.delta > 0.0)) fail(ErrorCode::ConfigError, "delta must be positive");

    std::vector<double> grid = build_grid(system, x, y, n, q);
    std::vector<uint8_t> match(grid.size());
    for (size_t t = 0; t < grid.size(); ++t) match[t] = grid[t] < params.delta;

    // Full table kept for the witness backtrack.
    std::vector<uint16_t> L(static_cast<size_t>(n + 1) * (n + 1), 0);
    auto at = [n](int i, int j) { return static_cast<size_t>(i) * (n + 1) + j; };
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            uint16_t v = std::max(L[at(i - 1, j)], L[at(i, j - 1)]);
            if (match[static_cast<size_t>(i - 1) * n + (j - 1)])
                v = std::max<uint16_t>(v, L[at(i - 1, j - 1)] + 1);
            L[at(i, j)] = v;
        }

    MatchResult out;
    out.size = L[at(n, n)];
    out.value = match_defect(n, out.size);
    int i = n, j = n;
    while (i > 0 && j > 0) {
        if (match[static_cast<size_t>(i - 1) * n + (j - 1)] &&
            L[at(i, j)] == L[at(i - 1, j - 1)] + 1) {
            out.witness.emplace_back(i - 1, j - 1);
            --i, --j;
        } else if (L[at(i - 1, j)] >= L[at(i, j - 1)]) {
            --i;
        } else {
            --j;
        }
    }
    std::reverse(out.witness.begin(), out.witness.end());
    return out;
}

double fk_distance(const DynSystem& system, const Point& x, const Point& y, int n, int q,
                   FkPolicy policy) {
    require_pair(system, x, y, n, q);
    if (n > kMaxMatchHorizon) fail(ErrorCode::ConfigError, "matching horizon capped at 256");
    std::vector<double> grid = build_grid(system, x, y, n, q);
    return fk_from_grid(grid, n, policy);
}

double edit_distance(const Point& x, const Point& y, int n) {
    if (!x.symbolic() || !y.symbolic())
        fail(ErrorCode::KindMismatch, "edit distance is defined on words");
    if (n < 1) fail(ErrorCode::ConfigError, "edit distance needs n >= 1");
    if (n > kMaxMatchHorizon) fail(ErrorCode::ConfigError, "matching horizon capped at 256");
    const auto& a = x.symbols();
    const auto& b = y.symbols();
    if (a.size() < static_cast<size_t>(n) || b.size() < static_cast<size_t>(n))
        fail(ErrorCode::LengthTooShort, "words shorter than the comparison window");

    uint16_t rows[2][kMaxMatchHorizon + 1];
    std::memset(rows[0], 0, sizeof(uint16_t) * (n + 1));
    for (int i = 0; i < n; ++i) {
        const uint16_t* prev = rows[i & 1];
        uint16_t* cur = rows[(i & 1) ^ 1];
        cur[0] = 0;
        for (int j = 0; j < n; ++j)
            cur[j + 1] = (a[i] == b[j]) ? static_cast<uint16_t>(prev[j] + 1)
                                        : std::max(prev[j + 1], cur[j]);
    }
    return match_defect(n, rows[n & 1][n]);
}

double orbit_distance(const DynSystem& system, const Point& x, const Point& y, int n,
                      const MetricKind& kind) {
    switch (kind.family) {
        case MetricFamily::Bowen: return bowen_distance(system, x, y, n, kind.q);
        case MetricFamily::Mean: return mean_distance(system, x, y, n, kind.q);
        case MetricFamily::MaxMean: return maxmean_distance(system, x, y, n, kind.q);
        case MetricFamily::FeldmanKatok: return fk_distance(system, x, y, n, kind.q);
    }
    fail(ErrorCode::ConfigError, "unreachable");
}

bool orbit_ball_contains(const DynSystem& system, const Point& center, const Point& y, int n,
                         double radius, const MetricKind& kind) {
    require_pair(system, center, y, n, kind.q);
    if (!(radius > 0.0)) fail(ErrorCode::ConfigError, "radius must be positive");
    switch (kind.family) {
        case MetricFamily::Bowen: return bowen_contains(system, center, y, n, kind.q, radius);
        case MetricFamily::Mean: return mean_contains(system, center, y, n, kind.q, radius);
        case MetricFamily::MaxMean:
            return maxmean_contains(system, center, y, n, kind.q, radius);
        case MetricFamily::FeldmanKatok:
            return fk_contains(system, center, y, n, kind.q, radius);
    }
    fail(ErrorCode::ConfigError, "unreachable");
}

}  // namespace orbp
