#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace orbp {

inline constexpr int kSchemaVersion = 1;

// One output row in the fixed column order
// schema_version,command,system,potential,measure,kind,q,n,eps,M,seed,method,
// value,covered_mass,centers,walltime_ms,status.
// Sentinels print as empty CSV fields / JSON nulls: negative q/n/M, NaN
// doubles, has_seed=false, empty strings stay empty.
struct ResultRow {
    std::string command;
    std::string system;
    std::string potential;
    std::string measure;
    std::string kind;
    long long q = -1;
    long long n = -1;
    double eps = std::numeric_limits<double>::quiet_NaN();
    long long M = -1;
    bool has_seed = false;
    uint64_t seed = 0;
    std::string method;
    double value = std::numeric_limits<double>::quiet_NaN();
    double covered_mass = std::numeric_limits<double>::quiet_NaN();
    double centers = std::numeric_limits<double>::quiet_NaN();
    double walltime_ms = 0.0;
    std::string status = "ok";
};

// %.12g; the textual determinism contract is pinned to this format.
std::string format_g12(double v);

// RFC-4180 quoting: fields containing comma, quote or newline are wrapped in
// double quotes with inner quotes doubled.
std::string csv_escape(const std::string& field);

// '#'-prefixed resolved-config lines, the schema header row, one line per row.
std::string render_csv(const std::vector<std::pair<std::string, std::string>>& config,
                       const std::vector<ResultRow>& rows);

// {"schema_version":1,"command":...,"config":{...},"rows":[...]} with two-space
// indentation, keys in schema order, non-finite numbers as null.
std::string render_json(const std::string& command,
                        const std::vector<std::pair<std::string, std::string>>& config,
                        const std::vector<ResultRow>& rows);

// Write to path + ".tmp", then rename over path; no partial file is ever
// visible at path.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace orbp
