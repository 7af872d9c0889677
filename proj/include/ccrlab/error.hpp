#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ccrlab {

enum class ErrorCode {
  kModeMismatch,
  kInvalidSymmetry,
  kArity,
  kParity,
  kIncompleteKernel,
  kKernelInconsistency,
  kDegreeGuard,
  kInvalidCovariance,
  kInternalInconsistency,
  kSpectrumNotGapped,
  kTruncationInsufficient,
  kInvalidInput,
  kCausalContamination,
  kInvalidSlice,
  kWindowTooThin,
  kOnLightconeSingular,
  kQuadratureFailure,
  kOrderGuard,
  kTailTruncation,
  kOrderingKernelInvalid,
  kInvalidDifference,
  kResolution,
  kInvalidConfig,
  kParse,
};

std::string_view to_string(ErrorCode code);

// Numerical-check failures map to CLI exit status 3, everything else to 2.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ccrlab
