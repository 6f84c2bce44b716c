#pragma once

#include "orbp/orbit_metrics.hpp"
#include "orbp/systems.hpp"

// Slow, definition-shaped evaluators. They share no code with the production
// routes in orbit_metrics.cpp; the test suites and the `verify` command pit
// the two against each other.
namespace orbp::reference {

// Largest (q,n,delta)-match found by enumerating every pair of equal-size
// index subsets (the order-preserving bijection between two sorted subsets
// is unique). Exponential; guarded at n <= 12.
int max_match_size_exhaustive(const DynSystem& system, const Point& x, const Point& y,
                              const MatchParams& params);

// inf{delta > 0 : F_{n,delta}(x,y) < delta} evaluated from the definition
// over the finite candidate set {pairwise orbit distances} U {k/n}. The
// condition F_{n,delta} < delta is open in delta, so its infimum is the
// smallest candidate where the closure (match size at d <= delta, defect
// <= delta) holds; that closure is what gets tested per candidate.
double fk_distance_definition(const DynSystem& system, const Point& x, const Point& y, int n,
                              int q = 1);

}  // namespace orbp::reference
