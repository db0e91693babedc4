#include "bolab/error.hpp"

namespace bolab {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonZeroMean: return "NonZeroMean";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::MeanMismatch: return "MeanMismatch";
        case ErrorCode::ZeroData: return "ZeroData";
        case ErrorCode::Parse: return "ParseError";
        case ErrorCode::Io: return "IoError";
        case ErrorCode::BlowUp: return "BlowUp";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

BlowUpError::BlowUpError(int last_finite_step, const std::string& message)
    : Error(ErrorCode::BlowUp, message), last_finite_step_(last_finite_step) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace bolab
