#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace boussinesq {

enum class ErrorKind {
  InvalidArgument,
  SizeMismatch,
  NonIntegrable,
  QuadratureNotConverged,
  NotDecayed,
  StabilityViolation,
  FitUnreliable,
  OrderTooHigh,
  ComplexResidue,
  HistoryGap,
  NotContracting,
  ConfigInvalid,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// experiment runner can turn it into a failed record.
class LabError : public std::runtime_error {
 public:
  LabError(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace boussinesq
