#pragma once

#include <stdexcept>
#include <string>

namespace su2hk {

enum class ErrorCode {
    DomainError,
    DegenerateChart,
    SingularAtBoundary,
    QuadratureNotConverged,
    TruncationCap,
    OverflowGuard,
    SlowDecay,
    PoleAtOrigin,
    NoBracket,
    NegativeCurvatureTerm,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode c, const std::string& what)
        : std::runtime_error(std::string(error_name(c)) + ": " + what), code_(c) {}
    ErrorCode code() const noexcept { return code_; }

    // convergence-type failures vs bad input, used by the CLI exit codes
    bool is_convergence() const noexcept {
        return code_ == ErrorCode::QuadratureNotConverged || code_ == ErrorCode::TruncationCap ||
               code_ == ErrorCode::SlowDecay || code_ == ErrorCode::NoBracket ||
               code_ == ErrorCode::OverflowGuard || code_ == ErrorCode::NegativeCurvatureTerm;
    }

private:
    ErrorCode code_;
};

}  // namespace su2hk
