#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace orbp {

// Fault hooks for exercising the verify command's sensitivity: each mode
// corrupts the REFERENCE evaluator of exactly one suite, so a healthy
// library must come out flagged. None leaves everything intact.
enum class FaultMode {
    None,
    LooseMatch,  // fk-oracle reference accepts ties (d <= delta instead of <)
    DropTerm,    // birkhoff reference omits the last orbit term
};

// "" / "loose-match" / "drop-term"; anything else is a ConfigError.
FaultMode parse_fault_mode(const std::string& name);

struct SuiteResult {
    std::string name;
    long long checked = 0;   // elementary assertions evaluated
    long long failures = 0;  // assertions violated
    double worst = 0.0;      // largest violation magnitude seen
    std::string detail;      // one line describing the worst violation
};

// The six property suites, in canonical order: chain, axioms, fk-oracle,
// monotone, birkhoff, cover.
const std::vector<std::string>& all_verify_suites();

// Runs the named suites (ConfigError for unknown names) over deterministic
// randomized instances: `pairs` randomized checks per suite spread across
// the built-in systems, horizons up to n_max. Same arguments, same results.
std::vector<SuiteResult> run_verify_suites(const std::vector<std::string>& suites, int n_max,
                                           int pairs, uint64_t seed, FaultMode fault);

}  // namespace orbp
