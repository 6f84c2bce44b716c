// Times the OpenMP kernels against their serial reference twins on the same
// inputs and checks the outputs agree bitwise. Exits nonzero on mismatch.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <vector>

#include "orbp/batch.hpp"
#include "orbp/measures.hpp"
#include "orbp/orbit_metrics.hpp"
#include "orbp/systems.hpp"

using namespace orbp;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double timed(F&& f) {
    double t0 = now_ms();
    f();
    return now_ms() - t0;
}

int mismatches(const std::vector<double>& a, const std::vector<double>& b) {
    int bad = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::memcmp(&a[i], &b[i], sizeof(double)) != 0) ++bad;
    return bad;
}

int mismatches(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
    int bad = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++bad;
    return bad;
}

}  // namespace

int main(int argc, char** argv) {
    int m = argc > 1 ? std::atoi(argv[1]) : 400;
    int n = argc > 2 ? std::atoi(argv[2]) : 24;
    uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 7;

    std::printf("batch kernels: %d points, orbit length %d, %d thread(s)\n", m, n,
                effective_threads());

    int failures = 0;
    MetricFamily fams[] = {MetricFamily::Bowen, MetricFamily::Mean, MetricFamily::MaxMean,
                           MetricFamily::FeldmanKatok};
    DynSystem systems[] = {DynSystem::full_shift(2), DynSystem::rotation(0.6180339887498949)};
    for (const DynSystem& system : systems) {
        EmpiricalMeasure mu =
            sample_measure(system.symbolic() ? MeasureSpec::bernoulli({0.5, 0.5})
                                             : MeasureSpec::lebesgue(),
                           system, m, seed);
        for (MetricFamily fam : fams) {
            MetricKind kind{fam, 1};
            std::vector<double> par, ser;
            double tp =
                timed([&] { par = distance_matrix(system, mu.points, mu.points, n, kind); });
            double ts = timed(
                [&] { ser = distance_matrix_serial(system, mu.points, mu.points, n, kind); });
            int bad = mismatches(par, ser);
            failures += bad;
            std::printf("  %-10s %-8s distance_matrix  parallel %8.1f ms  serial %8.1f ms  "
                        "speedup %.2fx  %s\n",
                        system_kind_name(system.kind()), metric_family_name(fam), tp, ts,
                        tp > 0 ? ts / tp : 0.0, bad ? "MISMATCH" : "match");

            std::vector<uint8_t> fp, fs;
            double radius = 0.25;
            double tq = timed(
                [&] { fp = membership_flags(system, mu.points[0], mu.points, n, radius, kind); });
            double tr = timed([&] {
                fs = membership_flags_serial(system, mu.points[0], mu.points, n, radius, kind);
            });
            bad = mismatches(fp, fs);
            failures += bad;
            std::printf("  %-10s %-8s membership_flags parallel %8.1f ms  serial %8.1f ms  "
                        "speedup %.2fx  %s\n",
                        system_kind_name(system.kind()), metric_family_name(fam), tq, tr,
                        tq > 0 ? tr / tq : 0.0, bad ? "MISMATCH" : "match");
        }
    }
    if (failures) {
        std::printf("FAILED: %d mismatching entries\n", failures);
        return 1;
    }
    std::printf("all parallel results match the serial reference\n");
    return 0;
}
