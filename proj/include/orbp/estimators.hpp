#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "orbp/measures.hpp"
#include "orbp/orbit_metrics.hpp"
#include "orbp/systems.hpp"

namespace orbp {

enum class CoverMethod { Greedy, ExactExhaustive };
const char* cover_method_name(CoverMethod method);

enum class EstimateVariant { MeasureTheoretic, TopologicalCover, TopologicalSpanning };
const char* estimate_variant_name(EstimateVariant variant);

// Largest candidate count the exhaustive cover solver accepts (2^20 subsets).
inline constexpr int kExactCoverLimit = 20;

// Largest grid the materialized topological cover path will enumerate;
// symbolic Bowen covers at q=1 bypass this through the closed cylinder path.
inline constexpr int kMaxMaterializedGrid = 4096;

// A feasible solution of the weighted ball-cover problem over a fixed
// candidate list: chosen centers, their total exponential Birkhoff weight,
// and the target mass their balls cover. Not necessarily optimal (greedy),
// so it upper-bounds the infimum it approximates.
struct CoverSolution {
    std::vector<int> center_indices;  // ascending; empty for the closed cylinder path
    double center_count = 0.0;        // = center_indices.size(), kept as a count
                                      // because the cylinder path never materializes
    double total_weight = 0.0;        // sum over centers of exp(S_n^q phi), index order
    double covered_mass = 0.0;        // recomputed post hoc in index order
    CoverMethod method = CoverMethod::Greedy;
};

struct PressureEstimate {
    double value = 0.0;  // log(total_weight)/n
    int n = 1;
    double eps = 0.0;
    MetricKind kind;
    EstimateVariant variant = EstimateVariant::MeasureTheoretic;
    double centers = 0.0;
    double covered_mass = std::numeric_limits<double>::quiet_NaN();
    // Filled by the inf-over-q layer: (q, value) per evaluated q; kind.q is
    // then the argmin (smallest q on ties).
    std::vector<std::pair<int, double>> per_q;
};

// Minimal-weight set of sample points whose eps-balls (orbit metric `kind`)
// capture sample mass strictly above 1-eps. Greedy uses the ratio rule
// penalty/gain with exact gain recomputation at selection time and ties
// broken by lowest candidate index; ExactExhaustive enumerates all subsets
// (EXACT_TOO_LARGE above kExactCoverLimit candidates). INFEASIBLE cannot
// trigger with candidates = sample support but is guarded.
CoverSolution covering_weight(const DynSystem& system, const Potential& phi,
                              const EmpiricalMeasure& mu, int n, double eps,
                              const MetricKind& kind, CoverMethod method = CoverMethod::Greedy);

PressureEstimate measure_pressure_estimate(const DynSystem& system, const Potential& phi,
                                           const EmpiricalMeasure& mu, int n, double eps,
                                           const MetricKind& kind,
                                           CoverMethod method = CoverMethod::Greedy);

// Minimum of the per-q measure estimates for q = 1..q_max; records every
// per-q value so the truncation of the infimum stays visible.
PressureEstimate inf_over_q_measure(const DynSystem& system, const Potential& phi,
                                    const EmpiricalMeasure& mu, int n, double eps,
                                    MetricFamily family, int q_max,
                                    CoverMethod method = CoverMethod::Greedy);

// All admissible words of the given length, lexicographic. ConfigError when
// the count exceeds cap (the caller decides how much it can materialize).
std::vector<Point> enumerate_admissible_words(const DynSystem& system, int length, int cap);

// Uniform circle grid with mesh 1/K <= eps/2 (K = ceil(2/eps) points).
std::vector<Point> uniform_circle_grid(double eps);

// Sum over all admissible words w of the given length of exp(sum_{i<n}
// phi(w_i)), by transfer-matrix recursion; with phi = Zero this counts the
// words. Needs a symbolic system and a per-symbol potential.
double cylinder_weight_sum(const DynSystem& system, const Potential& phi, int length, int n);

// Greedy full cover of the grid by eps-balls around grid points under the
// chosen orbit metric; total_weight as in CoverSolution, covered_mass = 1.
// Built-in grids: all admissible words of length (n-1)q + resolving_depth
// (symbolic; at q = 1 under Bowen, or FK with eps <= 1/n, the balls are
// singletons on that grid and the cover collapses to the closed cylinder
// sum), or the uniform circle grid. The explicit-grid overload checks
// eps/2-density (GRID_TOO_COARSE otherwise; exact for the circle, prefix
// completeness for shifts).
CoverSolution topological_cover_weight(const DynSystem& system, const Potential& phi, int n,
                                       double eps, const MetricKind& kind,
                                       CoverMethod method = CoverMethod::Greedy);
CoverSolution topological_cover_weight_on_grid(const DynSystem& system, const Potential& phi,
                                               int n, double eps, const MetricKind& kind,
                                               const std::vector<Point>& grid,
                                               CoverMethod method = CoverMethod::Greedy);

PressureEstimate topological_pressure_estimate(const DynSystem& system, const Potential& phi,
                                               int n, double eps, const MetricKind& kind,
                                               CoverMethod method = CoverMethod::Greedy);

// Spanning-set topological pressure: the grid covered fully by Bowen
// d_n-balls at radius eps, q = 1; value = (1/n) log of the cover weight.
PressureEstimate spanning_pressure(const DynSystem& system, const Potential& phi, int n,
                                   double eps, CoverMethod method = CoverMethod::Greedy);
PressureEstimate spanning_pressure_on_grid(const DynSystem& system, const Potential& phi,
                                           int n, double eps, const std::vector<Point>& grid,
                                           CoverMethod method = CoverMethod::Greedy);

PressureEstimate inf_over_q_topological(const DynSystem& system, const Potential& phi, int n,
                                        double eps, MetricFamily family, int q_max,
                                        CoverMethod method = CoverMethod::Greedy);

// Closed-form pressure of a one-step potential on a full shift or SFT:
// log sum_a e^{phi(a)} for the full shift, log lambda_max(diag(e^phi) A)
// for an SFT (power iteration to 1e-10, NOT_PRIMITIVE when the iteration
// does not settle). Empty transitions mean the full shift; empty phi_table
// means the zero potential.
double exact_shift_pressure(int k, const std::vector<std::vector<int>>& transitions,
                            const std::vector<double>& phi_table);

// Ground-truth P_top(T, phi) where a closed form exists (shifts with
// per-symbol potentials; rotation via unique ergodicity; doubling only for
// constant potentials); NaN when no closed form is known.
double exact_topological_pressure(const DynSystem& system, const Potential& phi);

// Ground-truth h_mu + integral of phi for the built-in measure laws.
double exact_measure_pressure(const DynSystem& system, const MeasureSpec& spec,
                              const Potential& phi);

// Per-center Brin-Katok estimates with order statistics. Centers whose
// empirical ball is empty are counted, not fabricated.
struct BrinKatokSummary {
    std::vector<double> values;  // one per center with nonempty ball, center order
    int empty_balls = 0;
    double median = std::numeric_limits<double>::quiet_NaN();
    double q25 = std::numeric_limits<double>::quiet_NaN();
    double q75 = std::numeric_limits<double>::quiet_NaN();
};

BrinKatokSummary brin_katok_profile(const EmpiricalMeasure& mu, const DynSystem& system,
                                    const std::vector<Point>& centers, double radius, int n,
                                    const MetricKind& kind);

// Convergence-table machinery: one estimate per (kind, eps, n) cell in
// canonical order, error codes recorded per cell, plus per-(kind, eps)
// stabilized values (mean of the last two n) and the linear-in-1/n
// extrapolation (n2 v2 - n1 v1)/(n2 - n1) from the two largest n. The table
// never reaches past its grid: with fewer than two usable n the
// extrapolation stays NaN.
struct TableSpec {
    EstimateVariant variant = EstimateVariant::MeasureTheoretic;
    std::vector<MetricKind> kinds;
    std::vector<int> ns;
    std::vector<double> epss;
    CoverMethod method = CoverMethod::Greedy;
};

struct TableCell {
    MetricKind kind;
    int n = 1;
    double eps = 0.0;
    PressureEstimate estimate;
    std::string status = "ok";  // "ok" or an error code name
};

struct TableSummaryRow {
    MetricKind kind;
    double eps = 0.0;
    int cells_ok = 0;
    double stabilized = std::numeric_limits<double>::quiet_NaN();
    double extrapolated = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceTable {
    std::vector<TableCell> cells;
    std::vector<TableSummaryRow> summary;
    double oracle = std::numeric_limits<double>::quiet_NaN();
};

// mu may be null for the topological variants (ConfigError when the variant
// needs a measure). oracle = NaN when no ground truth is known.
ConvergenceTable convergence_table(const DynSystem& system, const Potential& phi,
                                   const EmpiricalMeasure* mu, const TableSpec& spec,
                                   double oracle);

}  // namespace orbp
