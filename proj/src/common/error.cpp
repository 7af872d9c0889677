#include "ccrlab/error.hpp"

namespace ccrlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kModeMismatch: return "mode-mismatch";
    case ErrorCode::kInvalidSymmetry: return "invalid-symmetry";
    case ErrorCode::kArity: return "arity";
    case ErrorCode::kParity: return "parity";
    case ErrorCode::kIncompleteKernel: return "incomplete-kernel";
    case ErrorCode::kKernelInconsistency: return "kernel-inconsistency";
    case ErrorCode::kDegreeGuard: return "degree-guard";
    case ErrorCode::kInvalidCovariance: return "invalid-covariance";
    case ErrorCode::kInternalInconsistency: return "internal-inconsistency";
    case ErrorCode::kSpectrumNotGapped: return "spectrum-not-gapped";
    case ErrorCode::kTruncationInsufficient: return "truncation-insufficient";
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kCausalContamination: return "causal-contamination";
    case ErrorCode::kInvalidSlice: return "invalid-slice";
    case ErrorCode::kWindowTooThin: return "window-too-thin";
    case ErrorCode::kOnLightconeSingular: return "on-lightcone-singular";
    case ErrorCode::kQuadratureFailure: return "quadrature-failure";
    case ErrorCode::kOrderGuard: return "order-guard";
    case ErrorCode::kTailTruncation: return "tail-truncation";
    case ErrorCode::kOrderingKernelInvalid: return "ordering-kernel-invalid";
    case ErrorCode::kInvalidDifference: return "invalid-difference";
    case ErrorCode::kResolution: return "resolution";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kParse: return "parse";
  }
  return "unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::kKernelInconsistency:
    case ErrorCode::kInternalInconsistency:
    case ErrorCode::kSpectrumNotGapped:
    case ErrorCode::kCausalContamination:
    case ErrorCode::kOnLightconeSingular:
    case ErrorCode::kQuadratureFailure:
    case ErrorCode::kTailTruncation:
    case ErrorCode::kResolution:
    case ErrorCode::kTruncationInsufficient:
      return true;
    default:
      return false;
  }
}

}  // namespace ccrlab
