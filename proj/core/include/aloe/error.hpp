#pragma once

#include <stdexcept>
#include <string>

namespace aloe {

enum class ErrorCode {
  kDomain,
  kUnsampleableEvent,
  kInvalidInput,
  kNearSingularCovariance,
  kDegenerateConstraint,
  kEmptyMixture,
  kInvalidWeights,
  kInvalidDistribution,
  kDisconnectedNetwork,
  kInfeasibleDeterministicConstraint,
  kInvalidSpec,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// front ends can map them onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kUnsampleableEvent: return "unsampleable event";
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kNearSingularCovariance: return "near-singular covariance";
    case ErrorCode::kDegenerateConstraint: return "degenerate constraint";
    case ErrorCode::kEmptyMixture: return "empty mixture";
    case ErrorCode::kInvalidWeights: return "invalid weights";
    case ErrorCode::kInvalidDistribution: return "invalid distribution";
    case ErrorCode::kDisconnectedNetwork: return "disconnected network";
    case ErrorCode::kInfeasibleDeterministicConstraint: return "infeasible deterministic constraint";
    case ErrorCode::kInvalidSpec: return "invalid spec";
  }
  return "error";
}

}  // namespace aloe
