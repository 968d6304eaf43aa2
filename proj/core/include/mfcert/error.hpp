#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfcert {

enum class ErrorCode {
  NonHermitianInput,
  ConvergenceFailure,
  NotPSD,
  InvalidDensityMatrix,
  InvalidState,
  BadFactorIndex,
  SizeBudgetExceeded,
  ShapeMismatch,
  FixedPointStall,
  NotPermutationInvariant,
  DegenerateKernelCompletion,
  CertificationFailure,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code lets
/// callers branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mfcert
