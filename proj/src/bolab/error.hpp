#pragma once

#include <stdexcept>
#include <string>

namespace bolab {

enum class ErrorCode {
    InvalidArgument,
    NonZeroMean,
    GridMismatch,
    MeanMismatch,
    ZeroData,
    Parse,
    Io,
    BlowUp,
    NoConvergence,
    Internal,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Raised by the integrator; carries the index of the last step whose state was finite.
class BlowUpError : public Error {
public:
    BlowUpError(int last_finite_step, const std::string& message);
    int last_finite_step() const noexcept { return last_finite_step_; }

private:
    int last_finite_step_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace bolab
