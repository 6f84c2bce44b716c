#include "orbp/config.hpp"

#include <cctype>
#include <cerrno>
#include <climits>
#include <cstdlib>
#include <fstream>

namespace orbp {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

[[noreturn]] void bad_value(const std::string& what, const std::string& text,
                            const std::string& origin) {
    std::string where = origin.empty() ? "" : origin + ": ";
    fail(ErrorCode::ConfigError, where + what + ": cannot parse \"" + text + "\"");
}

}  // namespace

void KeyValueConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, "cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::ConfigError, path + ":" + std::to_string(lineno) + ":" +
                                             std::to_string(line.size() + 1) +
                                             ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        if (key.empty())
            fail(ErrorCode::ConfigError, path + ":" + std::to_string(lineno) + ":1" +
                                             ": empty key before '='");
        set(key, trim(line.substr(eq + 1)), path + ":" + std::to_string(lineno));
    }
}

void KeyValueConfig::set(const std::string& key, const std::string& value,
                         const std::string& origin) {
    entries_[key] = Entry{value, origin, false};
}

const KeyValueConfig::Entry* KeyValueConfig::find(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
}

bool KeyValueConfig::has(const std::string& key) const { return find(key) != nullptr; }

std::string KeyValueConfig::get(const std::string& key, const std::string& fallback) const {
    const Entry* e = find(key);
    return e ? e->value : fallback;
}

std::string KeyValueConfig::require(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) fail(ErrorCode::ConfigError, "missing required key " + key);
    return e->value;
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    return parse_int(e->value, e->origin + ": " + key);
}

uint64_t KeyValueConfig::get_u64(const std::string& key, uint64_t fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    return parse_u64(e->value, e->origin + ": " + key);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    return parse_double(e->value, e->origin + ": " + key);
}

std::vector<int> KeyValueConfig::get_int_list(const std::string& key,
                                              const std::vector<int>& fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    return parse_int_list(e->value, e->origin + ": " + key);
}

std::vector<double> KeyValueConfig::get_double_list(
    const std::string& key, const std::vector<double>& fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    return parse_double_list(e->value, e->origin + ": " + key);
}

void KeyValueConfig::reject_unused() const {
    for (const auto& [key, entry] : entries_)
        if (!entry.used)
            fail(ErrorCode::ConfigError,
                 (entry.origin.empty() ? "" : entry.origin + ": ") + "unknown key " + key);
}

int parse_int(const std::string& text, const std::string& what) {
    std::string t = trim(text);
    errno = 0;
    char* end = nullptr;
    long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || v < INT_MIN ||
        v > INT_MAX)
        bad_value(what, text, "");
    return static_cast<int>(v);
}

uint64_t parse_u64(const std::string& text, const std::string& what) {
    std::string t = trim(text);
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || t[0] == '-' || end != t.c_str() + t.size() || errno == ERANGE)
        bad_value(what, text, "");
    return static_cast<uint64_t>(v);
}

double parse_double(const std::string& text, const std::string& what) {
    std::string t = trim(text);
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) bad_value(what, text, "");
    return v;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (const std::string& part : split(text, ',')) out.push_back(parse_int(part, what));
    if (out.empty()) bad_value(what, text, "");
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const std::string& part : split(text, ','))
        out.push_back(parse_double(part, what));
    if (out.empty()) bad_value(what, text, "");
    return out;
}

MetricFamily parse_metric_family(const std::string& name) {
    std::string t = trim(name);
    if (t == "bowen") return MetricFamily::Bowen;
    if (t == "mean") return MetricFamily::Mean;
    if (t == "maxmean") return MetricFamily::MaxMean;
    if (t == "fk") return MetricFamily::FeldmanKatok;
    fail(ErrorCode::ConfigError,
         "unknown metric \"" + name + "\" (bowen, mean, maxmean, fk)");
}

std::vector<MetricFamily> parse_metric_family_list(const std::string& text) {
    std::vector<MetricFamily> out;
    for (const std::string& part : split(text, ','))
        out.push_back(parse_metric_family(part));
    return out;
}

CoverMethod parse_cover_method(const std::string& name) {
    std::string t = trim(name);
    if (t == "greedy") return CoverMethod::Greedy;
    if (t == "exact") return CoverMethod::ExactExhaustive;
    fail(ErrorCode::ConfigError, "unknown method \"" + name + "\" (greedy, exact)");
}

EstimateVariant parse_variant(const std::string& name) {
    std::string t = trim(name);
    if (t == "measure") return EstimateVariant::MeasureTheoretic;
    if (t == "cover") return EstimateVariant::TopologicalCover;
    if (t == "spanning") return EstimateVariant::TopologicalSpanning;
    fail(ErrorCode::ConfigError,
         "unknown variant \"" + name + "\" (measure, cover, spanning)");
}

DynSystem build_system(const KeyValueConfig& cfg) {
    std::string name = trim(cfg.require("system"));
    int length = cfg.get_int("L", kDefaultWordLength);
    // fullshiftN is shorthand for system=fullshift k=N
    if (name.rfind("fullshift", 0) == 0 && name.size() > 9) {
        int k = parse_int(name.substr(9), "fullshift alphabet suffix");
        if (cfg.get_int("k", k) != k)
            fail(ErrorCode::ConfigError, "k contradicts the fullshift suffix in " + name);
        return DynSystem::full_shift(k, length);
    }
    if (name == "fullshift") return DynSystem::full_shift(cfg.get_int("k", 2), length);
    if (name == "sft") {
        std::string rows = cfg.require("transitions");
        std::vector<std::vector<int>> matrix;
        for (const std::string& part : split(rows, ',')) {
            std::string row = trim(part);
            matrix.emplace_back();
            for (char c : row) {
                if (c != '0' && c != '1')
                    fail(ErrorCode::ConfigError,
                         "transitions rows must be 0/1 digit strings, got \"" + rows + "\"");
                matrix.back().push_back(c - '0');
            }
        }
        int k = cfg.get_int("k", static_cast<int>(matrix.size()));
        if (k != static_cast<int>(matrix.size()))
            fail(ErrorCode::ConfigError, "k does not match the transitions row count");
        return DynSystem::sft(std::move(matrix), length);
    }
    if (name == "doubling") return DynSystem::doubling();
    if (name == "rotation")
        return DynSystem::rotation(cfg.get_double("alpha", 0.6180339887498949));
    fail(ErrorCode::ConfigError,
         "unknown system \"" + name + "\" (fullshift, sft, doubling, rotation)");
}

Potential build_potential(const KeyValueConfig& cfg, const DynSystem& system) {
    std::string text = trim(cfg.get("potential", "zero"));
    std::string head = text, arg;
    size_t colon = text.find(':');
    if (colon != std::string::npos) {
        head = trim(text.substr(0, colon));
        arg = trim(text.substr(colon + 1));
    }

    if (head == "zero") {
        if (!arg.empty()) fail(ErrorCode::ConfigError, "potential zero takes no argument");
        return Potential::zero();
    }
    if (head == "constant") return Potential::constant(parse_double(arg, "potential constant"));
    if (head == "first_symbol") {
        if (!system.symbolic())
            fail(ErrorCode::ConfigError, "first_symbol potentials need a shift system");
        std::vector<double> table = parse_double_list(arg, "potential first_symbol");
        if (static_cast<int>(table.size()) != system.alphabet())
            fail(ErrorCode::ConfigError,
                 "first_symbol table size must equal the alphabet size");
        return Potential::first_symbol(std::move(table));
    }
    if (head == "circle") {
        if (system.symbolic())
            fail(ErrorCode::ConfigError, "circle potentials need a circle system");
        return Potential::circle(arg);
    }
    fail(ErrorCode::ConfigError, "unknown potential \"" + text +
                                     "\" (zero, constant:C, first_symbol:V0,V1,..., "
                                     "circle:identity|cos|dist0)");
}

MeasureSpec build_measure(const KeyValueConfig& cfg, const DynSystem& system) {
    std::string text = trim(cfg.require("measure"));
    std::string head = text, arg;
    size_t colon = text.find(':');
    if (colon != std::string::npos) {
        head = trim(text.substr(0, colon));
        arg = trim(text.substr(colon + 1));
    }

    MeasureSpec spec = MeasureSpec::lebesgue();
    if (head == "bernoulli") {
        spec = MeasureSpec::bernoulli(parse_double_list(arg, "measure bernoulli"));
    } else if (head == "markov") {
        std::vector<std::vector<double>> rows;
        for (const std::string& part : split(arg, ';'))
            rows.push_back(parse_double_list(part, "measure markov"));
        spec = MeasureSpec::markov(std::move(rows));
    } else if (head == "lebesgue") {
        if (!arg.empty()) fail(ErrorCode::ConfigError, "measure lebesgue takes no argument");
    } else {
        fail(ErrorCode::ConfigError,
             "unknown measure \"" + text +
                 "\" (bernoulli:P0,P1,..., markov:R00,R01;R10,R11, lebesgue)");
    }
    spec.require_compatible(system);
    return spec;
}

}  // namespace orbp
