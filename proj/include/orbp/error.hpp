#pragma once

#include <stdexcept>
#include <string>

namespace orbp {

// Failure classes that callers are expected to branch on. Anything not
// covered here (allocation failure, io) surfaces as the underlying
// std exception.
enum class ErrorCode {
    KindMismatch,      // symbolic point fed to a circle map or vice versa
    HorizonExhausted,  // orbit query needs more symbols than the word holds
    LengthTooShort,    // word shorter than the requested comparison window
    SpecMismatch,      // measure spec incompatible with the system
    EmptyBall,         // empirical ball has mass zero
    Infeasible,        // no candidate set reaches the required mass
    ExactTooLarge,     // exhaustive cover search beyond its size cap
    GridTooCoarse,     // covering grid is not dense enough for eps
    NotPrimitive,      // power iteration failed to converge
    ConfigError,       // malformed or contradictory run configuration
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace orbp
