#include "su2hk/errors.hpp"

namespace su2hk {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DomainError: return "DOMAIN_ERROR";
        case ErrorCode::DegenerateChart: return "DEGENERATE_CHART";
        case ErrorCode::SingularAtBoundary: return "SINGULAR_AT_BOUNDARY";
        case ErrorCode::QuadratureNotConverged: return "QUADRATURE_NOT_CONVERGED";
        case ErrorCode::TruncationCap: return "TRUNCATION_CAP";
        case ErrorCode::OverflowGuard: return "OVERFLOW_GUARD";
        case ErrorCode::SlowDecay: return "SLOW_DECAY";
        case ErrorCode::PoleAtOrigin: return "POLE_AT_ORIGIN";
        case ErrorCode::NoBracket: return "NO_BRACKET";
        case ErrorCode::NegativeCurvatureTerm: return "NEGATIVE_CURVATURE_TERM";
    }
    return "UNKNOWN";
}

}  // namespace su2hk
