#include "orbp/error.hpp"

namespace orbp {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::KindMismatch: return "KIND_MISMATCH";
        case ErrorCode::HorizonExhausted: return "HORIZON_EXHAUSTED";
        case ErrorCode::LengthTooShort: return "LENGTH_TOO_SHORT";
        case ErrorCode::SpecMismatch: return "SPEC_MISMATCH";
        case ErrorCode::EmptyBall: return "EMPTY_BALL";
        case ErrorCode::Infeasible: return "INFEASIBLE";
        case ErrorCode::ExactTooLarge: return "EXACT_TOO_LARGE";
        case ErrorCode::GridTooCoarse: return "GRID_TOO_COARSE";
        case ErrorCode::NotPrimitive: return "NOT_PRIMITIVE";
        case ErrorCode::ConfigError: return "CONFIG_ERROR";
    }
    return "UNKNOWN";
}

}  // namespace orbp
