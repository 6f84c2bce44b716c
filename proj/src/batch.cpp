#include "orbp/batch.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace orbp {

int effective_threads() {
    static const int cached = [] {
        int n = 1;
#ifdef _OPENMP
        n = omp_get_max_threads();
#endif
        if (const char* env = std::getenv("ORBIT_PRESSURE_THREADS")) {
            long cap = std::strtol(env, nullptr, 10);
            if (cap >= 1 && cap < n) n = static_cast<int>(cap);
        }
        return std::max(1, n);
    }();
    return cached;
}

std::vector<double> distance_matrix(const DynSystem& system, const std::vector<Point>& xs,
                                    const std::vector<Point>& ys, int n,
                                    const MetricKind& kind) {
    const int rows = static_cast<int>(xs.size());
    const int cols = static_cast<int>(ys.size());
    std::vector<double> out(static_cast<size_t>(rows) * cols);
#pragma omp parallel for num_threads(effective_threads()) schedule(static)
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            out[static_cast<size_t>(i) * cols + j] =
                orbit_distance(system, xs[i], ys[j], n, kind);
    return out;
}

std::vector<double> distance_matrix_serial(const DynSystem& system,
                                           const std::vector<Point>& xs,
                                           const std::vector<Point>& ys, int n,
                                           const MetricKind& kind) {
    const int rows = static_cast<int>(xs.size());
    const int cols = static_cast<int>(ys.size());
    std::vector<double> out(static_cast<size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            out[static_cast<size_t>(i) * cols + j] =
                orbit_distance(system, xs[i], ys[j], n, kind);
    return out;
}

std::vector<uint8_t> membership_flags(const DynSystem& system, const Point& center,
                                      const std::vector<Point>& points, int n, double radius,
                                      const MetricKind& kind) {
    const int m = static_cast<int>(points.size());
    std::vector<uint8_t> out(m);
#pragma omp parallel for num_threads(effective_threads()) schedule(static)
    for (int i = 0; i < m; ++i)
        out[i] = orbit_ball_contains(system, center, points[i], n, radius, kind) ? 1 : 0;
    return out;
}

std::vector<uint8_t> membership_flags_serial(const DynSystem& system, const Point& center,
                                             const std::vector<Point>& points, int n,
                                             double radius, const MetricKind& kind) {
    const int m = static_cast<int>(points.size());
    std::vector<uint8_t> out(m);
    for (int i = 0; i < m; ++i)
        out[i] = orbit_ball_contains(system, center, points[i], n, radius, kind) ? 1 : 0;
    return out;
}

namespace {

std::vector<std::vector<uint32_t>> mirror_upper(
    std::vector<std::vector<uint32_t>>&& upper) {
    // upper[i] holds indices j > i inside ball(i); the relation is symmetric.
    const size_t m = upper.size();
    std::vector<std::vector<uint32_t>> lists(m);
    std::vector<uint32_t> degree(m, 1);  // self membership
    for (size_t i = 0; i < m; ++i)
        for (uint32_t j : upper[i]) {
            ++degree[i];
            ++degree[j];
        }
    for (size_t i = 0; i < m; ++i) lists[i].reserve(degree[i]);
    // Ascending fill: for column j, first everything mirrored from rows
    // i < j, then the diagonal, then row j itself.
    for (size_t i = 0; i < m; ++i)
        for (uint32_t j : upper[i]) lists[j].push_back(static_cast<uint32_t>(i));
    for (size_t i = 0; i < m; ++i) {
        lists[i].push_back(static_cast<uint32_t>(i));
        for (uint32_t j : upper[i]) lists[i].push_back(j);
    }
    return lists;
}

}  // namespace

std::vector<std::vector<uint32_t>> coverage_lists(const DynSystem& system,
                                                  const std::vector<Point>& points, int n,
                                                  double radius, const MetricKind& kind) {
    const int m = static_cast<int>(points.size());
    std::vector<std::vector<uint32_t>> upper(m);
#pragma omp parallel for num_threads(effective_threads()) schedule(dynamic, 16)
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (orbit_ball_contains(system, points[i], points[j], n, radius, kind))
                upper[i].push_back(static_cast<uint32_t>(j));
    return mirror_upper(std::move(upper));
}

std::vector<std::vector<uint32_t>> coverage_lists_serial(const DynSystem& system,
                                                         const std::vector<Point>& points,
                                                         int n, double radius,
                                                         const MetricKind& kind) {
    const int m = static_cast<int>(points.size());
    std::vector<std::vector<uint32_t>> upper(m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (orbit_ball_contains(system, points[i], points[j], n, radius, kind))
                upper[i].push_back(static_cast<uint32_t>(j));
    return mirror_upper(std::move(upper));
}

}  // namespace orbp
