#include "boussinesq/error.hpp"

namespace boussinesq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::NonIntegrable: return "NonIntegrable";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::NotDecayed: return "NotDecayed";
    case ErrorKind::StabilityViolation: return "StabilityViolation";
    case ErrorKind::FitUnreliable: return "FitUnreliable";
    case ErrorKind::OrderTooHigh: return "OrderTooHigh";
    case ErrorKind::ComplexResidue: return "ComplexResidue";
    case ErrorKind::HistoryGap: return "HistoryGap";
    case ErrorKind::NotContracting: return "NotContracting";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

LabError::LabError(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace boussinesq
