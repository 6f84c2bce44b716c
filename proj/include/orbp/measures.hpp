#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbp/orbit_metrics.hpp"
#include "orbp/systems.hpp"

namespace orbp {

enum class MeasureKind { Bernoulli, Markov, Lebesgue };

// Sampling law for a built-in invariant measure: an iid product over the
// alphabet, a stationary Markov chain, or Lebesgue on the circle.
class MeasureSpec {
public:
    static MeasureSpec bernoulli(std::vector<double> probs);
    // Row-stochastic matrix; the stationary vector is computed by damped
    // iteration and validated to sup error 1e-9.
    static MeasureSpec markov(std::vector<std::vector<double>> rows);
    static MeasureSpec lebesgue();

    MeasureKind kind() const { return kind_; }
    const std::vector<double>& probs() const { return probs_; }
    const std::vector<double>& row(int a) const;
    const std::vector<double>& stationary() const { return stationary_; }

    // SpecMismatch unless the law produces points of this system: shift laws
    // need a matching alphabet (Markov rows must vanish on forbidden SFT
    // transitions; iid needs the full shift), Lebesgue needs the circle.
    void require_compatible(const DynSystem& system) const;

    std::string describe() const;

private:
    MeasureKind kind_ = MeasureKind::Lebesgue;
    std::vector<double> probs_;
    std::vector<std::vector<double>> rows_;
    std::vector<double> stationary_;
};

// A weighted finite sample standing in for the measure. Weights are
// positive and sum to 1 (validated to 1e-12 with compensated summation).
struct EmpiricalMeasure {
    std::vector<Point> points;
    std::vector<double> weights;
    std::string provenance;

    int size() const { return static_cast<int>(points.size()); }
    void validate(const DynSystem& system) const;
};

// Deterministic in (spec, system, count, seed): the generator is a fixed
// mt19937_64 stream mapped through explicit transforms, so equal seeds give
// bitwise equal samples on any platform.
EmpiricalMeasure sample_measure(const MeasureSpec& spec, const DynSystem& system, int count,
                                uint64_t seed);

// Uniform weights on x, Tx, ..., T^{length-1} x.
EmpiricalMeasure orbit_average_measure(const DynSystem& system, const Point& x0, int length);

// Total weight of sample points strictly inside the orbit ball. Membership
// flags are evaluated in parallel; the weighted sum runs serially in index
// order, so the value does not depend on the thread count.
double ball_mass(const EmpiricalMeasure& mu, const DynSystem& system, const Point& center,
                 double radius, int n, const MetricKind& kind);

// -log(ball_mass)/n; EmptyBall when no sample point lands inside.
double brin_katok_estimate(const EmpiricalMeasure& mu, const DynSystem& system,
                           const Point& center, double radius, int n, const MetricKind& kind);

// One row per point: weight, then the symbol string or the coordinate
// (printed to full round-trip precision).
void save_measure_csv(const EmpiricalMeasure& mu, const std::string& path);
EmpiricalMeasure load_measure_csv(const std::string& path, const DynSystem& system);

}  // namespace orbp
