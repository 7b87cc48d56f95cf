#include "heis/error.hpp"

namespace heis {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotInSubgroup: return "NotInSubgroup";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::MarginViolated: return "MarginViolated";
    case ErrorKind::MonotonicityViolated: return "MonotonicityViolated";
    case ErrorKind::DependentNormals: return "DependentNormals";
    case ErrorKind::VanishingGradient: return "VanishingGradient";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::OrderingViolation: return "OrderingViolation";
    case ErrorKind::WindowExit: return "WindowExit";
    case ErrorKind::OriginNotZero: return "OriginNotZero";
    case ErrorKind::MeanBisectionFailure: return "MeanBisectionFailure";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace heis
