#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tritherm {

enum class ErrorCode {
    // configuration / validation
    ResonanceViolation,
    OrderingViolation,
    DegenerateQubits,
    NonPositiveFrequency,
    InvalidBath,
    InvalidArgument,
    ParseError,
    InvalidSpec,
    IoError,
    // numerical
    ChannelInconsistency,
    ConvergenceFailure,
    SingularSteadyState,
    NumericalInstability,
    FirstLawViolation,
    SecondLawViolation,
    NoConvergence,
    DegenerateDenominator,
    BothCurrentsZero,
    PointFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for codes that describe bad user input rather than a numerical failure.
bool is_validation_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    bool is_validation() const noexcept { return is_validation_error(code_); }

private:
    ErrorCode code_;
};

}  // namespace tritherm
