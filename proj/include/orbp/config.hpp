#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "orbp/estimators.hpp"
#include "orbp/measures.hpp"
#include "orbp/orbit_metrics.hpp"
#include "orbp/systems.hpp"

namespace orbp {

// key=value configuration with file/flag layering: load_file() first, then
// set() for each explicit command-line flag, so flags override the file.
// Every lookup marks its key consumed; reject_unused() turns leftovers into
// ConfigError (typo guard). Value errors cite the origin (file:line or the
// flag name).
class KeyValueConfig {
public:
    // Lines are `key = value`; blank lines and lines starting with # are
    // skipped. ConfigError with path:line:column on malformed lines.
    void load_file(const std::string& path);
    void set(const std::string& key, const std::string& value,
             const std::string& origin = "flag");

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;

    int get_int(const std::string& key, int fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::vector<int> get_int_list(const std::string& key,
                                  const std::vector<int>& fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    // ConfigError naming the first never-consumed key.
    void reject_unused() const;

private:
    struct Entry {
        std::string value;
        std::string origin;
        mutable bool used = false;
    };
    const Entry* find(const std::string& key) const;
    std::map<std::string, Entry> entries_;
};

// Scalar/list parsers shared by the config and flag layers; `what` names the
// value in the ConfigError message.
int parse_int(const std::string& text, const std::string& what);
uint64_t parse_u64(const std::string& text, const std::string& what);
double parse_double(const std::string& text, const std::string& what);
std::vector<int> parse_int_list(const std::string& text, const std::string& what);
std::vector<double> parse_double_list(const std::string& text, const std::string& what);

MetricFamily parse_metric_family(const std::string& name);
std::vector<MetricFamily> parse_metric_family_list(const std::string& text);
CoverMethod parse_cover_method(const std::string& name);
EstimateVariant parse_variant(const std::string& name);

// system=fullshift|sft|doubling|rotation with k=, transitions= (rows of 0/1
// digits, comma-separated: transitions=11,10), L=, alpha=.
DynSystem build_system(const KeyValueConfig& cfg);

// potential=zero | constant:C | first_symbol:V0,V1,... | circle:identity|cos|dist0,
// checked for compatibility with the system.
Potential build_potential(const KeyValueConfig& cfg, const DynSystem& system);

// measure=bernoulli:P0,P1,... | markov:R00,R01;R10,R11 | lebesgue,
// checked for compatibility with the system.
MeasureSpec build_measure(const KeyValueConfig& cfg, const DynSystem& system);

}  // namespace orbp
