#pragma once

#include <cstdint>
#include <vector>

#include "orbp/orbit_metrics.hpp"
#include "orbp/systems.hpp"

// Batch kernels over point sets. Each has an OpenMP version and a plain-loop
// serial twin; outputs are bitwise identical because parallel iterations only
// write disjoint slots and every reduction runs serially in index order. The
// test suite and the bench tool hold the twins against each other.
namespace orbp {

// Worker count for the parallel kernels: OpenMP's limit capped by the
// ORBIT_PRESSURE_THREADS environment variable (read once).
int effective_threads();

// Row-major |xs| x |ys| matrix of orbit distances.
std::vector<double> distance_matrix(const DynSystem& system, const std::vector<Point>& xs,
                                    const std::vector<Point>& ys, int n,
                                    const MetricKind& kind);
std::vector<double> distance_matrix_serial(const DynSystem& system,
                                           const std::vector<Point>& xs,
                                           const std::vector<Point>& ys, int n,
                                           const MetricKind& kind);

// 0/1 flags: points[i] inside the strict radius-ball around center.
std::vector<uint8_t> membership_flags(const DynSystem& system, const Point& center,
                                      const std::vector<Point>& points, int n, double radius,
                                      const MetricKind& kind);
std::vector<uint8_t> membership_flags_serial(const DynSystem& system, const Point& center,
                                             const std::vector<Point>& points, int n,
                                             double radius, const MetricKind& kind);

// For every point, the ascending list of point indices inside its ball
// (self included). The relation is symmetric, so only the upper triangle is
// evaluated and the result is mirrored.
std::vector<std::vector<uint32_t>> coverage_lists(const DynSystem& system,
                                                  const std::vector<Point>& points, int n,
                                                  double radius, const MetricKind& kind);
std::vector<std::vector<uint32_t>> coverage_lists_serial(const DynSystem& system,
                                                         const std::vector<Point>& points,
                                                         int n, double radius,
                                                         const MetricKind& kind);

}  // namespace orbp
