#include "mfcert/error.hpp"

namespace mfcert {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::InvalidDensityMatrix: return "InvalidDensityMatrix";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::BadFactorIndex: return "BadFactorIndex";
    case ErrorCode::SizeBudgetExceeded: return "SizeBudgetExceeded";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::FixedPointStall: return "FixedPointStall";
    case ErrorCode::NotPermutationInvariant: return "NotPermutationInvariant";
    case ErrorCode::DegenerateKernelCompletion: return "DegenerateKernelCompletion";
    case ErrorCode::CertificationFailure: return "CertificationFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace mfcert
