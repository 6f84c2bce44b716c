#include "orbp/measures.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "orbp/batch.hpp"

namespace orbp {

namespace {

// std::uniform_real_distribution is implementation-defined; these explicit
// transforms keep sampled measures identical across toolchains.
struct SampleRng {
    std::mt19937_64 eng;

    explicit SampleRng(uint64_t seed) : eng(seed) {}

    double uniform() { return (eng() >> 11) * 0x1.0p-53; }
    uint32_t uniform_ticks() { return static_cast<uint32_t>(eng() >> 32); }

    int categorical(const std::vector<double>& probs) {
        double u = uniform();
        double acc = 0.0;
        for (size_t a = 0; a < probs.size(); ++a) {
            acc += probs[a];
            if (u < acc) return static_cast<int>(a);
        }
        return static_cast<int>(probs.size()) - 1;  // float slop at the top
    }
};

void check_probability_vector(const std::vector<double>& p) {
    if (p.size() < 2) fail(ErrorCode::ConfigError, "probability vector needs >= 2 entries");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || v > 1.0) fail(ErrorCode::ConfigError, "probabilities must be in [0,1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        fail(ErrorCode::ConfigError, "probabilities must sum to 1");
}

}  // namespace

MeasureSpec MeasureSpec::bernoulli(std::vector<double> probs) {
    check_probability_vector(probs);
    MeasureSpec s;
    s.kind_ = MeasureKind::Bernoulli;
    s.probs_ = std::move(probs);
    return s;
}

MeasureSpec MeasureSpec::markov(std::vector<std::vector<double>> rows) {
    int k = static_cast<int>(rows.size());
    if (k < 2) fail(ErrorCode::ConfigError, "markov chain needs >= 2 states");
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != k)
            fail(ErrorCode::ConfigError, "markov matrix must be square");
        check_probability_vector(r);
    }

    // Damped fixed-point iteration for pi P = pi; damping handles periodic
    // chains, the final residual check rejects chains without convergence.
    std::vector<double> pi(k, 1.0 / k), next(k, 0.0);
    for (int it = 0; it < 200000; ++it) {
        for (int b = 0; b < k; ++b) {
            double acc = 0.0;
            for (int a = 0; a < k; ++a) acc += pi[a] * rows[a][b];
            next[b] = 0.5 * (acc + pi[b]);
        }
        double norm = 0.0, change = 0.0;
        for (int b = 0; b < k; ++b) {
            norm += next[b];
            change = std::max(change, std::abs(next[b] - pi[b]));
        }
        for (int b = 0; b < k; ++b) pi[b] = next[b] / norm;
        if (change < 1e-14) break;
    }
    double residual = 0.0;
    for (int b = 0; b < k; ++b) {
        double acc = 0.0;
        for (int a = 0; a < k; ++a) acc += pi[a] * rows[a][b];
        residual = std::max(residual, std::abs(acc - pi[b]));
    }
    if (residual > 1e-9)
        fail(ErrorCode::ConfigError, "markov chain has no stationary vector to 1e-9");

    MeasureSpec s;
    s.kind_ = MeasureKind::Markov;
    s.rows_ = std::move(rows);
    s.stationary_ = std::move(pi);
    return s;
}

MeasureSpec MeasureSpec::lebesgue() { return MeasureSpec{}; }

const std::vector<double>& MeasureSpec::row(int a) const {
    if (kind_ != MeasureKind::Markov) fail(ErrorCode::ConfigError, "not a markov spec");
    if (a < 0 || a >= static_cast<int>(rows_.size()))
        fail(ErrorCode::ConfigError, "state out of range");
    return rows_[a];
}

void MeasureSpec::require_compatible(const DynSystem& system) const {
    switch (kind_) {
        case MeasureKind::Bernoulli:
            if (system.kind() != SystemKind::FullShift)
                fail(ErrorCode::SpecMismatch, "iid sampling needs the full shift");
            if (static_cast<int>(probs_.size()) != system.alphabet())
                fail(ErrorCode::SpecMismatch, "alphabet size mismatch");
            return;
        case MeasureKind::Markov: {
            if (!system.symbolic())
                fail(ErrorCode::SpecMismatch, "markov sampling needs a shift system");
            int k = static_cast<int>(rows_.size());
            if (k != system.alphabet()) fail(ErrorCode::SpecMismatch, "alphabet size mismatch");
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                    if (rows_[a][b] > 0.0 && !system.allowed(a, b))
                        fail(ErrorCode::SpecMismatch,
                             "markov row charges a forbidden transition");
            return;
        }
        case MeasureKind::Lebesgue:
            if (system.symbolic())
                fail(ErrorCode::SpecMismatch, "lebesgue sampling needs a circle system");
            return;
    }
}

std::string MeasureSpec::describe() const {
    switch (kind_) {
        case MeasureKind::Lebesgue: return "lebesgue";
        case MeasureKind::Bernoulli: {
            std::string out = "bernoulli(";
            char buf[40];
            for (size_t a = 0; a < probs_.size(); ++a) {
                std::snprintf(buf, sizeof buf, "%s%.17g", a ? "," : "", probs_[a]);
                out += buf;
            }
            return out + ")";
        }
        case MeasureKind::Markov: {
            std::string out = "markov(";
            char buf[40];
            for (size_t a = 0; a < rows_.size(); ++a) {
                if (a) out += ';';
                for (size_t b = 0; b < rows_[a].size(); ++b) {
                    std::snprintf(buf, sizeof buf, "%s%.17g", b ? "," : "", rows_[a][b]);
                    out += buf;
                }
            }
            return out + ")";
        }
    }
    return "unknown";
}

void EmpiricalMeasure::validate(const DynSystem& system) const {
    if (points.empty()) fail(ErrorCode::ConfigError, "empty sample");
    if (points.size() != weights.size())
        fail(ErrorCode::ConfigError, "points and weights disagree in length");
    long double sum = 0.0L;
    for (double w : weights) {
        if (!(w > 0.0)) fail(ErrorCode::ConfigError, "weights must be positive");
        sum += w;
    }
    if (std::abs(static_cast<double>(sum - 1.0L)) > 1e-12)
        fail(ErrorCode::ConfigError, "weights must sum to 1");
    for (const Point& p : points) system.check_point(p);
}

EmpiricalMeasure sample_measure(const MeasureSpec& spec, const DynSystem& system, int count,
                                uint64_t seed) {
    if (count < 1) fail(ErrorCode::ConfigError, "sample size must be positive");
    spec.require_compatible(system);
    SampleRng rng(seed);

    EmpiricalMeasure mu;
    mu.points.reserve(count);
    mu.weights.assign(count, 1.0 / count);

    const int L = system.word_length();
    for (int i = 0; i < count; ++i) {
        switch (spec.kind()) {
            case MeasureKind::Bernoulli: {
                std::vector<uint8_t> w(L);
                for (int t = 0; t < L; ++t)
                    w[t] = static_cast<uint8_t>(rng.categorical(spec.probs()));
                mu.points.push_back(Point::word(std::move(w)));
                break;
            }
            case MeasureKind::Markov: {
                std::vector<uint8_t> w(L);
                int a = rng.categorical(spec.stationary());
                w[0] = static_cast<uint8_t>(a);
                for (int t = 1; t < L; ++t) {
                    a = rng.categorical(spec.row(a));
                    w[t] = static_cast<uint8_t>(a);
                }
                mu.points.push_back(Point::word(std::move(w)));
                break;
            }
            case MeasureKind::Lebesgue:
                mu.points.push_back(Point::circle_ticks(rng.uniform_ticks()));
                break;
        }
    }

    char buf[96];
    std::snprintf(buf, sizeof buf, ",count=%d,seed=%llu)", count,
                  static_cast<unsigned long long>(seed));
    mu.provenance = "iid(" + spec.describe() + buf;
    return mu;
}

EmpiricalMeasure orbit_average_measure(const DynSystem& system, const Point& x0, int length) {
    if (length < 1) fail(ErrorCode::ConfigError, "orbit length must be positive");
    EmpiricalMeasure mu;
    mu.points = system.orbit_segment(x0, length, 1);
    mu.weights.assign(length, 1.0 / length);
    char buf[64];
    std::snprintf(buf, sizeof buf, "orbit(length=%d)", length);
    mu.provenance = buf;
    return mu;
}

double ball_mass(const EmpiricalMeasure& mu, const DynSystem& system, const Point& center,
                 double radius, int n, const MetricKind& kind) {
    if (mu.points.empty()) fail(ErrorCode::ConfigError, "empty sample");
    std::vector<uint8_t> inside = membership_flags(system, center, mu.points, n, radius, kind);
    double mass = 0.0;
    for (size_t i = 0; i < inside.size(); ++i)
        if (inside[i]) mass += mu.weights[i];
    return mass;
}

double brin_katok_estimate(const EmpiricalMeasure& mu, const DynSystem& system,
                           const Point& center, double radius, int n, const MetricKind& kind) {
    double mass = ball_mass(mu, system, center, radius, n, kind);
    if (mass <= 0.0)
        fail(ErrorCode::EmptyBall, "no sample point inside the orbit ball");
    return -std::log(mass) / n;
}

void save_measure_csv(const EmpiricalMeasure& mu, const std::string& path) {
    std::ostringstream out;
    out << "# empirical measure: " << mu.provenance << "\n";
    char buf[64];
    for (size_t i = 0; i < mu.points.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,", mu.weights[i]);
        out << buf;
        const Point& p = mu.points[i];
        if (p.symbolic()) {
            for (uint8_t s : p.symbols()) {
                if (s > 9) fail(ErrorCode::ConfigError, "csv words support alphabets up to 10");
                out << static_cast<char>('0' + s);
            }
        } else {
            std::snprintf(buf, sizeof buf, "%.17g", p.coord());
            out << buf;
        }
        out << "\n";
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::ConfigError, "cannot open " + path);
    f << out.str();
    if (!f.good()) fail(ErrorCode::ConfigError, "write failed: " + path);
}

EmpiricalMeasure load_measure_csv(const std::string& path, const DynSystem& system) {
    std::ifstream f(path);
    if (!f) fail(ErrorCode::ConfigError, "cannot open " + path);
    EmpiricalMeasure mu;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos)
            fail(ErrorCode::ConfigError, "malformed measure row: " + line);
        mu.weights.push_back(std::stod(line.substr(0, comma)));
        std::string payload = line.substr(comma + 1);
        if (payload.empty()) fail(ErrorCode::ConfigError, "malformed measure row: " + line);
        if (system.symbolic()) {
            std::vector<uint8_t> w(payload.size());
            for (size_t t = 0; t < payload.size(); ++t) {
                if (payload[t] < '0' || payload[t] > '9')
                    fail(ErrorCode::ConfigError, "bad symbol in measure row: " + line);
                w[t] = static_cast<uint8_t>(payload[t] - '0');
            }
            mu.points.push_back(Point::word(std::move(w)));
        } else {
            mu.points.push_back(Point::circle(std::stod(payload)));
        }
    }
    mu.provenance = "csv(" + path + ")";
    mu.validate(system);
    return mu;
}

}  // namespace orbp
