#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orbp/config.hpp"
#include "orbp/estimators.hpp"
#include "orbp/measures.hpp"
#include "orbp/orbit_metrics.hpp"
#include "orbp/report.hpp"
#include "orbp/systems.hpp"
#include "orbp/verify.hpp"

using namespace orbp;

namespace {

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

// Flags are recorded as key=value assignments and replayed on top of the
// --config file, so the file provides defaults and flags override.
struct FlagLayer {
    std::string config_path;
    std::vector<std::array<std::string, 3>> assignments;  // key, value, origin

    KeyValueConfig resolve() const {
        KeyValueConfig cfg;
        if (!config_path.empty()) cfg.load_file(config_path);
        for (const auto& kv : assignments) cfg.set(kv[0], kv[1], kv[2]);
        return cfg;
    }
};

void add_key_option(CLI::App* cmd, FlagLayer& layer, const std::string& flag,
                    const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        flag,
        [&layer, key, flag](const std::string& v) {
            layer.assignments.push_back({key, v, "flag " + flag});
        },
        help);
}

void add_key_flag(CLI::App* cmd, FlagLayer& layer, const std::string& flag,
                  const std::string& key, const std::string& help) {
    cmd->add_flag_function(
        flag,
        [&layer, key, flag](int64_t count) {
            if (count > 0) layer.assignments.push_back({key, "1", "flag " + flag});
        },
        help);
}

// Same engine-to-value transforms as the sampling layer.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(uint64_t seed) : eng(seed) {}
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    int below(int k) { return static_cast<int>(uniform() * k); }
    uint32_t ticks() { return static_cast<uint32_t>(eng() >> 32); }
};

Point random_point(const DynSystem& system, Rng& rng) {
    if (!system.symbolic()) return Point::circle_ticks(rng.ticks());
    const int k = system.alphabet();
    std::vector<uint8_t> w(static_cast<size_t>(system.word_length()));
    w[0] = static_cast<uint8_t>(rng.below(k));
    for (size_t i = 1; i < w.size(); ++i) {
        uint8_t succ[256];
        int cnt = 0;
        for (int b = 0; b < k; ++b)
            if (system.allowed(w[i - 1], b)) succ[cnt++] = static_cast<uint8_t>(b);
        w[i] = succ[rng.below(cnt)];
    }
    return Point::word(std::move(w));
}

Point parse_point(const DynSystem& system, const std::string& text, const char* which) {
    if (!system.symbolic()) {
        Point p = Point::circle(parse_double(text, which));
        system.check_point(p);
        return p;
    }
    if (system.alphabet() > 10)
        fail(ErrorCode::ConfigError,
             "inline words cover alphabets up to 10 symbols; sample with seed= instead");
    std::vector<uint8_t> w;
    for (char c : text) {
        if (c < '0' || c > '9')
            fail(ErrorCode::ConfigError, std::string(which) + ": \"" + text +
                                             "\" is not a digit word for a shift system");
        w.push_back(static_cast<uint8_t>(c - '0'));
    }
    if (w.empty()) fail(ErrorCode::ConfigError, std::string(which) + ": empty word");
    Point p = Point::word(std::move(w));
    system.check_point(p);
    return p;
}

std::string point_text(const DynSystem& system, const Point& p) {
    if (!system.symbolic()) return format_g12(p.coord());
    std::string out;
    for (uint8_t s : p.symbols()) out += static_cast<char>('0' + s);
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_g12(v[i]);
    return out;
}

std::string join_families(const std::vector<MetricFamily>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i)
        out += std::string(i ? "," : "") + metric_family_name(v[i]);
    return out;
}

std::vector<MetricFamily> canonical_families(std::vector<MetricFamily> fams) {
    std::sort(fams.begin(), fams.end(),
              [](MetricFamily a, MetricFamily b) { return static_cast<int>(a) < static_cast<int>(b); });
    fams.erase(std::unique(fams.begin(), fams.end()), fams.end());
    if (fams.empty()) fail(ErrorCode::ConfigError, "metric list is empty");
    return fams;
}

template <typename T>
std::vector<T> canonical_list(std::vector<T> v, const char* what) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.empty()) fail(ErrorCode::ConfigError, std::string(what) + " list is empty");
    return v;
}

std::vector<int> require_int_list(const KeyValueConfig& cfg, const std::string& key) {
    if (!cfg.has(key)) fail(ErrorCode::ConfigError, "missing required key " + key);
    return cfg.get_int_list(key, {});
}

std::vector<double> require_double_list(const KeyValueConfig& cfg, const std::string& key) {
    if (!cfg.has(key)) fail(ErrorCode::ConfigError, "missing required key " + key);
    return cfg.get_double_list(key, {});
}

// Resolved system parameters in re-parseable key=value form.
void echo_system(ConfigEcho& echo, const DynSystem& system) {
    echo.emplace_back("system", system_kind_name(system.kind()));
    if (system.symbolic()) {
        echo.emplace_back("k", std::to_string(system.alphabet()));
        if (system.kind() == SystemKind::Sft) {
            std::string rows;
            for (int a = 0; a < system.alphabet(); ++a) {
                if (a) rows += ',';
                for (int b = 0; b < system.alphabet(); ++b)
                    rows += system.allowed(a, b) ? '1' : '0';
            }
            echo.emplace_back("transitions", rows);
        }
        echo.emplace_back("L", std::to_string(system.word_length()));
    } else if (system.kind() == SystemKind::Rotation) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", system.alpha());
        echo.emplace_back("alpha", buf);
    }
}

struct OutputSink {
    std::string command;
    std::string format;  // "csv" or "json"
    std::string path;    // empty = stdout

    void emit(const ConfigEcho& echo, const std::vector<ResultRow>& rows) const {
        std::string content =
            format == "json" ? render_json(command, echo, rows) : render_csv(echo, rows);
        if (path.empty()) {
            std::fwrite(content.data(), 1, content.size(), stdout);
        } else {
            write_text_atomic(path, content);
            std::printf("wrote %s (%zu rows)\n", path.c_str(), rows.size());
        }
    }
};

OutputSink make_sink(const KeyValueConfig& cfg, const std::string& command,
                     bool out_required) {
    OutputSink sink;
    sink.command = command;
    sink.format = cfg.get("format", "csv");
    if (sink.format != "csv" && sink.format != "json")
        fail(ErrorCode::ConfigError, "format must be csv or json");
    sink.path = cfg.get("out", "");
    if (out_required && sink.path.empty())
        fail(ErrorCode::ConfigError, command + " requires out=FILE");
    return sink;
}

struct CellClock {
    bool enabled = false;
    std::chrono::steady_clock::time_point t0;
    void start() {
        if (enabled) t0 = std::chrono::steady_clock::now();
    }
    double stop() const {
        if (!enabled) return 0.0;
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

int run_dist(const KeyValueConfig& cfg) {
    DynSystem system = build_system(cfg);
    std::vector<int> ns = canonical_list(require_int_list(cfg, "n"), "n");
    std::vector<int> qs = canonical_list(cfg.get_int_list("q", {1}), "q");
    std::vector<MetricFamily> families =
        canonical_families(parse_metric_family_list(cfg.get("metric", "bowen")));

    bool same = cfg.get_int("x-equals-y", 0) != 0;
    bool has_seed = cfg.has("seed");
    uint64_t seed = cfg.get_u64("seed", 1);
    Rng rng(seed);

    Point x = Point::circle_ticks(0);
    if (cfg.has("x"))
        x = parse_point(system, cfg.require("x"), "x");
    else if (has_seed)
        x = random_point(system, rng);
    else
        fail(ErrorCode::ConfigError, "dist needs x= (or seed= to sample the pair)");

    Point y = x;
    if (!same) {
        if (cfg.has("y"))
            y = parse_point(system, cfg.require("y"), "y");
        else if (has_seed)
            y = random_point(system, rng);
        else
            fail(ErrorCode::ConfigError, "dist needs y=, x-equals-y, or seed=");
    }

    CellClock clock;
    clock.enabled = cfg.get_int("timings", 0) != 0;
    OutputSink sink = make_sink(cfg, "dist", false);
    cfg.reject_unused();

    ConfigEcho echo;
    echo.emplace_back("command", "dist");
    echo_system(echo, system);
    echo.emplace_back("x", point_text(system, x));
    echo.emplace_back("y", point_text(system, y));
    echo.emplace_back("metric", join_families(families));
    echo.emplace_back("q", join_ints(qs));
    echo.emplace_back("n", join_ints(ns));
    if (has_seed) echo.emplace_back("seed", std::to_string(seed));

    std::vector<ResultRow> rows;
    for (MetricFamily fam : families) {
        for (int q : qs) {
            for (int n : ns) {
                ResultRow row;
                row.command = "dist";
                row.system = system.describe();
                row.kind = metric_family_name(fam);
                row.q = q;
                row.n = n;
                row.has_seed = has_seed;
                row.seed = seed;
                clock.start();
                try {
                    row.value = orbit_distance(system, x, y, n, MetricKind{fam, q});
                } catch (const Error& e) {
                    row.status = error_code_name(e.code());
                }
                row.walltime_ms = clock.stop();
                rows.push_back(std::move(row));
            }
        }
    }
    sink.emit(echo, rows);
    return 0;
}

// Shared grid runner for entropy, pressure, and table.
struct GridSetup {
    DynSystem system;
    Potential phi;
    GridSetup(DynSystem s, Potential p) : system(std::move(s)), phi(std::move(p)) {}
    EstimateVariant variant = EstimateVariant::TopologicalCover;
    CoverMethod method = CoverMethod::Greedy;
    std::vector<MetricFamily> families;
    std::vector<int> qs;  // empty in qmax mode
    int qmax = 0;         // 0 = explicit q list
    std::vector<int> ns;
    std::vector<double> epss;
    bool has_measure = false;
    MeasureSpec measure = MeasureSpec::lebesgue();
    EmpiricalMeasure mu;
    long long M = -1;
    bool has_seed = false;
    uint64_t seed = 0;
};

GridSetup grid_setup(const KeyValueConfig& cfg, bool force_zero_potential,
                     const char* command) {
    GridSetup g(build_system(cfg), Potential::zero());
    if (force_zero_potential) {
        if (cfg.has("potential"))
            fail(ErrorCode::ConfigError,
                 std::string(command) + " fixes potential=zero; use the pressure command");
    } else {
        g.phi = build_potential(cfg, g.system);
    }
    g.variant = parse_variant(cfg.get("variant", "cover"));
    g.method = parse_cover_method(cfg.get("method", "greedy"));
    g.families = canonical_families(parse_metric_family_list(cfg.get("metric", "bowen")));
    g.ns = canonical_list(require_int_list(cfg, "n"), "n");
    g.epss = canonical_list(require_double_list(cfg, "eps"), "eps");

    if (cfg.has("qmax")) {
        if (cfg.has("q"))
            fail(ErrorCode::ConfigError, "give q= or qmax=, not both");
        g.qmax = cfg.get_int("qmax", 1);
        if (g.qmax < 1) fail(ErrorCode::ConfigError, "qmax must be >= 1");
    } else {
        g.qs = canonical_list(cfg.get_int_list("q", {1}), "q");
    }

    if (g.variant == EstimateVariant::TopologicalSpanning) {
        if (g.families.size() != 1 || g.families[0] != MetricFamily::Bowen ||
            g.qmax != 0 || g.qs != std::vector<int>{1})
            fail(ErrorCode::ConfigError,
                 "variant=spanning uses metric=bowen with q=1 only");
    }

    if (g.variant == EstimateVariant::MeasureTheoretic) {
        g.has_measure = true;
        g.measure = build_measure(cfg, g.system);
        int M = cfg.get_int("M", 10000);
        if (M < 1) fail(ErrorCode::ConfigError, "M must be >= 1");
        g.M = M;
        g.has_seed = true;
        g.seed = cfg.get_u64("seed", 1);
        g.mu = sample_measure(g.measure, g.system, M, g.seed);
    }
    return g;
}

void echo_grid(ConfigEcho& echo, const GridSetup& g, const char* command) {
    echo.emplace_back("command", command);
    echo_system(echo, g.system);
    echo.emplace_back("potential", g.phi.describe());
    if (g.has_measure) {
        echo.emplace_back("measure", g.measure.describe());
        echo.emplace_back("M", std::to_string(g.M));
        echo.emplace_back("seed", std::to_string(g.seed));
    }
    echo.emplace_back("variant", estimate_variant_name(g.variant));
    echo.emplace_back("metric", join_families(g.families));
    if (g.qmax > 0)
        echo.emplace_back("qmax", std::to_string(g.qmax));
    else
        echo.emplace_back("q", join_ints(g.qs));
    echo.emplace_back("n", join_ints(g.ns));
    echo.emplace_back("eps", join_doubles(g.epss));
    echo.emplace_back("method", cover_method_name(g.method));
}

ResultRow base_row(const GridSetup& g, const char* command) {
    ResultRow row;
    row.command = command;
    row.system = g.system.describe();
    row.potential = g.phi.describe();
    if (g.has_measure) {
        row.measure = g.measure.describe();
        row.M = g.M;
        row.has_seed = g.has_seed;
        row.seed = g.seed;
    }
    row.method = cover_method_name(g.method);
    return row;
}

void fill_estimate(ResultRow& row, const PressureEstimate& est) {
    row.value = est.value;
    row.covered_mass = est.covered_mass;
    row.centers = est.centers;
}

std::vector<ResultRow> run_grid_cells(const GridSetup& g, const char* command,
                                      CellClock& clock) {
    std::vector<ResultRow> rows;

    if (g.qmax > 0) {
        // inf-over-q mode: one row per evaluated q, then an inf-q row at the
        // argmin (smallest q on ties).
        for (MetricFamily fam : g.families) {
            for (double eps : g.epss) {
                for (int n : g.ns) {
                    ResultRow cell = base_row(g, command);
                    cell.kind = metric_family_name(fam);
                    cell.n = n;
                    cell.eps = eps;
                    clock.start();
                    try {
                        PressureEstimate est =
                            g.variant == EstimateVariant::MeasureTheoretic
                                ? inf_over_q_measure(g.system, g.phi, g.mu, n, eps, fam,
                                                     g.qmax, g.method)
                                : inf_over_q_topological(g.system, g.phi, n, eps, fam,
                                                         g.qmax, g.method);
                        double ms = clock.stop();
                        for (const auto& [q, value] : est.per_q) {
                            ResultRow per = cell;
                            per.q = q;
                            per.value = value;
                            per.walltime_ms = 0.0;
                            rows.push_back(std::move(per));
                        }
                        ResultRow inf = cell;
                        inf.command = "inf-q";
                        inf.q = est.kind.q;
                        fill_estimate(inf, est);
                        inf.walltime_ms = ms;
                        rows.push_back(std::move(inf));
                    } catch (const Error& e) {
                        cell.q = 0;
                        cell.status = error_code_name(e.code());
                        cell.walltime_ms = clock.stop();
                        rows.push_back(std::move(cell));
                    }
                }
            }
        }
        return rows;
    }

    for (MetricFamily fam : g.families) {
        for (int q : g.qs) {
            MetricKind kind{fam, q};
            for (double eps : g.epss) {
                for (int n : g.ns) {
                    ResultRow row = base_row(g, command);
                    row.kind = metric_family_name(fam);
                    row.q = q;
                    row.n = n;
                    row.eps = eps;
                    clock.start();
                    try {
                        PressureEstimate est;
                        switch (g.variant) {
                            case EstimateVariant::MeasureTheoretic:
                                est = measure_pressure_estimate(g.system, g.phi, g.mu, n,
                                                                eps, kind, g.method);
                                break;
                            case EstimateVariant::TopologicalCover:
                                est = topological_pressure_estimate(g.system, g.phi, n, eps,
                                                                    kind, g.method);
                                break;
                            case EstimateVariant::TopologicalSpanning:
                                est = spanning_pressure(g.system, g.phi, n, eps, g.method);
                                break;
                        }
                        fill_estimate(row, est);
                    } catch (const Error& e) {
                        row.status = error_code_name(e.code());
                    }
                    row.walltime_ms = clock.stop();
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

int run_pressure(const KeyValueConfig& cfg, bool force_zero_potential, const char* command) {
    GridSetup g = grid_setup(cfg, force_zero_potential, command);
    CellClock clock;
    clock.enabled = cfg.get_int("timings", 0) != 0;
    OutputSink sink = make_sink(cfg, command, false);
    cfg.reject_unused();

    ConfigEcho echo;
    echo_grid(echo, g, command);
    std::vector<ResultRow> rows = run_grid_cells(g, command, clock);
    sink.emit(echo, rows);
    return 0;
}

int run_table(const KeyValueConfig& cfg) {
    GridSetup g = grid_setup(cfg, false, "table");
    if (g.qmax > 0) fail(ErrorCode::ConfigError, "table takes an explicit q= list");
    CellClock clock;
    clock.enabled = cfg.get_int("timings", 0) != 0;
    OutputSink sink = make_sink(cfg, "table", true);
    cfg.reject_unused();

    TableSpec spec;
    spec.variant = g.variant;
    spec.method = g.method;
    spec.ns = g.ns;
    spec.epss = g.epss;
    for (MetricFamily fam : g.families)
        for (int q : g.qs) spec.kinds.push_back(MetricKind{fam, q});

    double oracle = std::numeric_limits<double>::quiet_NaN();
    try {
        oracle = g.variant == EstimateVariant::MeasureTheoretic
                     ? exact_measure_pressure(g.system, g.measure, g.phi)
                     : exact_topological_pressure(g.system, g.phi);
    } catch (const Error&) {
        // no closed form; the oracle column stays empty
    }

    clock.start();
    ConvergenceTable table = convergence_table(
        g.system, g.phi, g.has_measure ? &g.mu : nullptr, spec, oracle);
    double total_ms = clock.stop();

    std::vector<ResultRow> rows;
    for (const TableCell& cell : table.cells) {
        ResultRow row = base_row(g, "table");
        row.kind = metric_family_name(cell.kind.family);
        row.q = cell.kind.q;
        row.n = cell.n;
        row.eps = cell.eps;
        row.status = cell.status;
        if (cell.status == "ok") fill_estimate(row, cell.estimate);
        rows.push_back(std::move(row));
    }
    for (const TableSummaryRow& s : table.summary) {
        ResultRow stab = base_row(g, "summary");
        stab.command = "summary";
        stab.kind = metric_family_name(s.kind.family);
        stab.q = s.kind.q;
        stab.eps = s.eps;
        stab.status = "stabilized";
        stab.value = s.stabilized;
        rows.push_back(stab);

        ResultRow extr = stab;
        extr.status = "extrapolated";
        extr.value = s.extrapolated;
        rows.push_back(extr);

        if (std::isfinite(table.oracle)) {
            ResultRow gap = stab;
            gap.status = "gap";
            double best = std::isfinite(s.extrapolated) ? s.extrapolated : s.stabilized;
            gap.value = std::fabs(best - table.oracle);
            rows.push_back(gap);
        }
    }
    if (std::isfinite(table.oracle)) {
        ResultRow orc = base_row(g, "summary");
        orc.command = "summary";
        orc.status = "oracle";
        orc.value = table.oracle;
        rows.push_back(orc);
    }
    if (clock.enabled && !rows.empty()) rows.front().walltime_ms = total_ms;

    ConfigEcho echo;
    echo_grid(echo, g, "table");
    echo.emplace_back("format", sink.format);
    echo.emplace_back("out", sink.path);
    sink.emit(echo, rows);
    return 0;
}

int run_brin_katok(const KeyValueConfig& cfg) {
    DynSystem system = build_system(cfg);
    MeasureSpec measure = build_measure(cfg, system);
    int M = cfg.get_int("M", 10000);
    if (M < 1) fail(ErrorCode::ConfigError, "M must be >= 1");
    uint64_t seed = cfg.get_u64("seed", 1);
    int center_count = cfg.get_int("centers", 25);
    if (center_count < 1) fail(ErrorCode::ConfigError, "centers must be >= 1");
    uint64_t center_seed = cfg.get_u64("center-seed", seed + 1);
    std::vector<int> ns = canonical_list(require_int_list(cfg, "n"), "n");
    std::vector<double> radii = canonical_list(require_double_list(cfg, "radius"), "radius");
    std::vector<int> qs = canonical_list(cfg.get_int_list("q", {1}), "q");
    std::vector<MetricFamily> families =
        canonical_families(parse_metric_family_list(cfg.get("metric", "bowen")));
    CellClock clock;
    clock.enabled = cfg.get_int("timings", 0) != 0;
    OutputSink sink = make_sink(cfg, "brin-katok", false);
    cfg.reject_unused();

    EmpiricalMeasure mu = sample_measure(measure, system, M, seed);
    EmpiricalMeasure center_mu = sample_measure(measure, system, center_count, center_seed);

    ConfigEcho echo;
    echo.emplace_back("command", "brin-katok");
    echo_system(echo, system);
    echo.emplace_back("measure", measure.describe());
    echo.emplace_back("M", std::to_string(M));
    echo.emplace_back("seed", std::to_string(seed));
    echo.emplace_back("centers", std::to_string(center_count));
    echo.emplace_back("center-seed", std::to_string(center_seed));
    echo.emplace_back("metric", join_families(families));
    echo.emplace_back("q", join_ints(qs));
    echo.emplace_back("n", join_ints(ns));
    echo.emplace_back("radius", join_doubles(radii));

    std::vector<ResultRow> rows;
    for (MetricFamily fam : families) {
        for (int q : qs) {
            for (double radius : radii) {
                for (int n : ns) {
                    ResultRow row;
                    row.command = "brin-katok";
                    row.system = system.describe();
                    row.measure = measure.describe();
                    row.kind = metric_family_name(fam);
                    row.q = q;
                    row.n = n;
                    row.eps = radius;
                    row.M = M;
                    row.has_seed = true;
                    row.seed = seed;
                    clock.start();
                    try {
                        BrinKatokSummary s = brin_katok_profile(mu, system, center_mu.points,
                                                                radius, n, MetricKind{fam, q});
                        double ms = clock.stop();
                        // the method column carries the order statistic
                        const char* stats[] = {"median", "q25", "q75"};
                        double vals[] = {s.median, s.q25, s.q75};
                        for (int i = 0; i < 3; ++i) {
                            ResultRow stat = row;
                            stat.method = stats[i];
                            stat.value = vals[i];
                            stat.centers = static_cast<double>(s.values.size());
                            if (s.values.empty()) stat.status = "EMPTY_BALL";
                            stat.walltime_ms = i == 0 ? ms : 0.0;
                            rows.push_back(std::move(stat));
                        }
                        if (s.empty_balls > 0) {
                            ResultRow empty = row;
                            empty.method = "empty-balls";
                            empty.value = static_cast<double>(s.empty_balls);
                            rows.push_back(std::move(empty));
                        }
                    } catch (const Error& e) {
                        row.status = error_code_name(e.code());
                        row.walltime_ms = clock.stop();
                        rows.push_back(std::move(row));
                    }
                }
            }
        }
    }
    sink.emit(echo, rows);
    return 0;
}

int run_verify(const KeyValueConfig& cfg) {
    std::vector<std::string> suites = all_verify_suites();
    if (cfg.has("suite")) {
        suites.clear();
        std::string text = cfg.require("suite");
        size_t start = 0;
        while (true) {
            size_t pos = text.find(',', start);
            suites.push_back(text.substr(start, pos == std::string::npos ? pos : pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
    }
    int n_max = cfg.get_int("n-max", 16);
    int pairs = cfg.get_int("pairs", 200);
    uint64_t seed = cfg.get_u64("seed", 1);
    FaultMode fault = parse_fault_mode(cfg.get("inject-fault", ""));
    cfg.reject_unused();

    std::vector<SuiteResult> results = run_verify_suites(suites, n_max, pairs, seed, fault);
    bool any_failed = false;
    for (const SuiteResult& r : results) {
        bool ok = r.failures == 0;
        any_failed = any_failed || !ok;
        std::printf("[%s] %-9s ok %lld/%lld, worst violation %.3g%s%s\n",
                    ok ? "PASS" : "FAIL", r.name.c_str(), r.checked - r.failures, r.checked,
                    r.worst, r.detail.empty() ? "" : " | ", r.detail.c_str());
    }
    std::printf("verify: %s\n", any_failed ? "FAILED" : "all suites passed");
    return any_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbit metrics and pressure estimation for shifts and circle maps"};
    app.require_subcommand(1);

    FlagLayer layer;
    std::string command;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", layer.config_path, "key=value config file");
        add_key_option(cmd, layer, "--system", "system",
                       "fullshift | sft | doubling | rotation (fullshiftN = k-ary)");
        add_key_option(cmd, layer, "--k", "k", "alphabet size (shifts)");
        add_key_option(cmd, layer, "--transitions", "transitions",
                       "SFT rows as 0/1 digit strings, comma-separated");
        add_key_option(cmd, layer, "--L", "L", "symbolic word length");
        add_key_option(cmd, layer, "--alpha", "alpha", "rotation angle in (0,1)");
        add_key_option(cmd, layer, "--seed", "seed", "RNG seed");
        add_key_option(cmd, layer, "--format", "format", "csv | json");
        add_key_option(cmd, layer, "--out", "out", "output file (atomic write)");
        add_key_flag(cmd, layer, "--timings", "timings",
                     "report wall times (off by default; keeps reruns byte-identical)");
        cmd->callback([&command, cmd]() { command = cmd->get_name(); });
    };
    auto add_grid = [&](CLI::App* cmd, bool with_potential) {
        if (with_potential)
            add_key_option(cmd, layer, "--potential", "potential",
                           "zero | constant:C | first_symbol:V,... | circle:NAME");
        add_key_option(cmd, layer, "--measure", "measure",
                       "bernoulli:P,... | markov:ROW;ROW | lebesgue");
        add_key_option(cmd, layer, "--M", "M", "sample size");
        add_key_option(cmd, layer, "--variant", "variant", "measure | cover | spanning");
        add_key_option(cmd, layer, "--metric", "metric",
                       "comma list of bowen, mean, maxmean, fk");
        add_key_option(cmd, layer, "--q", "q", "orbit step list");
        add_key_option(cmd, layer, "--qmax", "qmax", "evaluate q=1..Q and report the inf");
        add_key_option(cmd, layer, "--n", "n", "orbit length list");
        add_key_option(cmd, layer, "--eps", "eps", "radius list");
        add_key_option(cmd, layer, "--method", "method", "greedy | exact");
    };

    CLI::App* dist = app.add_subcommand("dist", "orbit metric values for one pair");
    add_common(dist);
    add_key_option(dist, layer, "--x", "x", "first point (digit word or coordinate)");
    add_key_option(dist, layer, "--y", "y", "second point");
    add_key_flag(dist, layer, "--x-equals-y", "x-equals-y", "reuse x as y");
    add_key_option(dist, layer, "--metric", "metric", "comma list of bowen, mean, maxmean, fk");
    add_key_option(dist, layer, "--q", "q", "orbit step list");
    add_key_option(dist, layer, "--n", "n", "orbit length list");

    CLI::App* entropy = app.add_subcommand("entropy", "pressure at potential zero");
    add_common(entropy);
    add_grid(entropy, false);

    CLI::App* pressure = app.add_subcommand("pressure", "pressure estimates on a grid");
    add_common(pressure);
    add_grid(pressure, true);

    CLI::App* brin = app.add_subcommand("brin-katok", "local entropy around sampled centers");
    add_common(brin);
    add_key_option(brin, layer, "--measure", "measure",
                   "bernoulli:P,... | markov:ROW;ROW | lebesgue");
    add_key_option(brin, layer, "--M", "M", "sample size");
    add_key_option(brin, layer, "--centers", "centers", "number of centers");
    add_key_option(brin, layer, "--center-seed", "center-seed", "seed for the centers");
    add_key_option(brin, layer, "--metric", "metric", "comma list of bowen, mean, maxmean, fk");
    add_key_option(brin, layer, "--q", "q", "orbit step list");
    add_key_option(brin, layer, "--n", "n", "orbit length list");
    add_key_option(brin, layer, "--radius", "radius", "ball radius list");

    CLI::App* table = app.add_subcommand("table", "convergence table with summary block");
    add_common(table);
    add_grid(table, true);

    CLI::App* verify = app.add_subcommand("verify", "property suites");
    add_common(verify);
    add_key_option(verify, layer, "--suite", "suite",
                   "comma list of chain, axioms, fk-oracle, monotone, birkhoff, cover");
    add_key_option(verify, layer, "--n-max", "n-max", "largest orbit length");
    add_key_option(verify, layer, "--pairs", "pairs", "randomized checks per suite");
    add_key_option(verify, layer, "--inject-fault", "inject-fault",
                   "corrupt a reference evaluator: loose-match | drop-term");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        KeyValueConfig cfg = layer.resolve();
        if (command == "dist") return run_dist(cfg);
        if (command == "entropy") return run_pressure(cfg, true, "entropy");
        if (command == "pressure") return run_pressure(cfg, false, "pressure");
        if (command == "brin-katok") return run_brin_katok(cfg);
        if (command == "table") return run_table(cfg);
        if (command == "verify") return run_verify(cfg);
        std::fprintf(stderr, "error: no command selected\n");
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::SpecMismatch ? 2
                                                                                         : 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
