#pragma once

#include <utility>
#include <vector>

#include "orbp/systems.hpp"

namespace orbp {

enum class MetricFamily { Bowen, Mean, MaxMean, FeldmanKatok };

const char* metric_family_name(MetricFamily family);

// A metric on n-step orbit segments: the family plus the orbit step q
// (distances look at x, T^q x, ..., T^{q(n-1)} x).
struct MetricKind {
    MetricFamily family = MetricFamily::Bowen;
    int q = 1;
};

// max_i d(T^{qi} x, T^{qi} y), i < n.
double bowen_distance(const DynSystem& system, const Point& x, const Point& y, int n,
                      int q = 1);

// (1/n) sum_i d(T^{qi} x, T^{qi} y).
double mean_distance(const DynSystem& system, const Point& x, const Point& y, int n,
                     int q = 1);

// max over 1 <= k <= n of the k-step mean. Sits between mean and Bowen.
double maxmean_distance(const DynSystem& system, const Point& x, const Point& y, int n,
                        int q = 1);

struct MatchParams {
    int n = 1;
    int q = 1;
    double delta = 0.0;  // strict threshold on matched base distances
};

struct MatchResult {
    int size = 0;      // largest order-preserving matching with d < delta
    double value = 0;  // F = 1 - size/n
    std::vector<std::pair<int, int>> witness;  // matched (i, pi(i)), increasing in both
};

// Largest (q,n,delta)-match between the two orbits: an order-preserving
// partial bijection of {0..n-1} whose matched pairs sit at base distance
// strictly below delta. Dynamic program over the n x n match grid plus a
// witness backtrack.
MatchResult match_value(const DynSystem& system, const Point& x, const Point& y,
                        const MatchParams& params);

enum class FkPolicy {
    BinarySearch,  // per-size binary search over the sorted grid distances
    Sweep,         // one ascending pass over the sorted grid distances
};

// Feldman-Katok distance inf{delta > 0 : F_{n,delta}(x,y) < delta},
// evaluated through the closed form min over 0 <= m <= n of
// max(tau_m, (n-m)/n), where tau_m is the cheapest bottleneck value of an
// order-preserving matching of size m. Matches need d < delta strictly, so
// tau_m is found with the closed predicate d <= t and the identity
// "match size at delta >= m iff delta > tau_m".
double fk_distance(const DynSystem& system, const Point& x, const Point& y, int n, int q = 1,
                   FkPolicy policy = FkPolicy::BinarySearch);

// 1 - lcs/n over the leading n symbols of two words (LengthTooShort if a
// word has fewer than n symbols).
double edit_distance(const Point& x, const Point& y, int n);

// Dispatch on kind.family / kind.q.
double orbit_distance(const DynSystem& system, const Point& x, const Point& y, int n,
                      const MetricKind& kind);

// Exactly orbit_distance(...) < radius, computed with early exits (and for
// the FK family a single threshold match instead of the full distance).
// The kernels and ball-mass queries are built on this.
bool orbit_ball_contains(const DynSystem& system, const Point& center, const Point& y, int n,
                         double radius, const MetricKind& kind);

// (n - m)/n as the one shared float expression, so every route that reasons
// about match defects agrees bitwise.
double match_defect(int n, int m);

// Smallest matching size m whose defect (n-m)/n lies strictly below radius.
// Equals n exactly when radius <= 1/n: there the FK ball degenerates to the
// Bowen ball (any missed index already costs 1/n).
int min_match_size(int n, double radius);

}  // namespace orbp
