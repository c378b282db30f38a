#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vanhove {

enum class ErrorKind {
  InvalidArgument,
  ZeroFrequency,
  BosePole,
  NonFiniteSample,
  DegenerateHessian,
  FactorizationFailed,
  FlatBranch,
  TraceStalled,
  InsufficientResolution,
  HypothesisViolated,
  SingularDesign,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ZeroFrequency: return "ZeroFrequency";
    case ErrorKind::BosePole: return "BosePole";
    case ErrorKind::NonFiniteSample: return "NonFiniteSample";
    case ErrorKind::DegenerateHessian: return "DegenerateHessian";
    case ErrorKind::FactorizationFailed: return "FactorizationFailed";
    case ErrorKind::FlatBranch: return "FlatBranch";
    case ErrorKind::TraceStalled: return "TraceStalled";
    case ErrorKind::InsufficientResolution: return "InsufficientResolution";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::SingularDesign: return "SingularDesign";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above, so
/// callers (the CLI in particular) can map it to a structured message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vanhove
