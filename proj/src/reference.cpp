#include "orbp/reference.hpp"

#include <algorithm>
#include <cmath>

namespace orbp::reference {

namespace {

// Grid of base distances taken through the public orbit API on purpose; the
// production kernels compute the same numbers through offset tricks, and the
// comparison should cover those too.
std::vector<double> grid_via_api(const DynSystem& system, const Point& x, const Point& y,
                                 int n, int q) {
    std::vector<Point> ox = system.orbit_segment(x, n, q);
    std::vector<Point> oy = system.orbit_segment(y, n, q);
    std::vector<double> grid(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            grid[static_cast<size_t>(i) * n + j] = system.base_distance(ox[i], oy[j]);
    return grid;
}

// Plain quadratic longest-chain count under pred; deliberately a separate
// copy from the production DP.
int chain_size(const std::vector<double>& grid, int n, double bound, bool strict) {
    std::vector<int> prev(n + 1, 0), cur(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        cur[0] = 0;
        for (int j = 0; j < n; ++j) {
            double d = grid[static_cast<size_t>(i) * n + j];
            bool ok = strict ? (d < bound) : (d <= bound);
            cur[j + 1] = ok ? prev[j] + 1 : std::max(prev[j + 1], cur[j]);
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

}  // namespace

int max_match_size_exhaustive(const DynSystem& system, const Point& x, const Point& y,
                              const MatchParams& params) {
    int n = params.n;
    if (n < 1 || n > 12)
        fail(ErrorCode::ConfigError, "exhaustive matcher is limited to n <= 12");
    std::vector<double> grid = grid_via_api(system, x, y, n, params.q);

    // Masks bucketed by popcount; the order-preserving bijection between two
    // sorted index sets is unique, so scanning (domain mask, range mask)
    // pairs of equal size enumerates every candidate matching.
    std::vector<std::vector<uint16_t>> by_pop(n + 1);
    for (uint32_t mask = 0; mask < (1u << n); ++mask)
        by_pop[__builtin_popcount(mask)].push_back(static_cast<uint16_t>(mask));

    for (int k = n; k >= 1; --k) {
        for (uint16_t dm : by_pop[k]) {
            int di[12];
            int t = 0;
            for (int i = 0; i < n; ++i)
                if (dm & (1u << i)) di[t++] = i;
            for (uint16_t rm : by_pop[k]) {
                int rj[12];
                t = 0;
                for (int j = 0; j < n; ++j)
                    if (rm & (1u << j)) rj[t++] = j;
                bool ok = true;
                for (int s = 0; s < k && ok; ++s)
                    ok = grid[static_cast<size_t>(di[s]) * n + rj[s]] < params.delta;
                if (ok) return k;
            }
        }
    }
    return 0;
}

double fk_distance_definition(const DynSystem& system, const Point& x, const Point& y, int n,
                              int q) {
    if (n < 1) fail(ErrorCode::ConfigError, "n must be positive");
    std::vector<double> grid = grid_via_api(system, x, y, n, q);

    std::vector<double> candidates(grid);
    for (int m = 0; m <= n; ++m) candidates.push_back(match_defect(n, m));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // The defining condition F_{n,delta} < delta holds exactly on an open
    // half line (v, inf); on a finite candidate set its infimum v is the
    // first candidate satisfying the closure: match size counted with
    // d <= delta and defect compared with <=.
    for (double delta : candidates) {
        int matched = chain_size(grid, n, delta, /*strict=*/false);
        if (match_defect(n, matched) <= delta) return delta;
    }
    return 1.0;  // unreachable: delta = 1 always satisfies the closure
}

}  // namespace orbp::reference
