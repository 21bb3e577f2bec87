#include "glift/error.hpp"

namespace glift {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::SeedNotOnZ: return "SeedNotOnZ";
    case ErrorKind::SeedRankDeficient: return "SeedRankDeficient";
    case ErrorKind::ChartDomainMismatch: return "ChartDomainMismatch";
    case ErrorKind::NonMonotone: return "NonMonotone";
    case ErrorKind::NonPositiveValue: return "NonPositiveValue";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::RankLoss: return "RankLoss";
    case ErrorKind::BoundaryEscape: return "BoundaryEscape";
    case ErrorKind::PredictorBlowup: return "PredictorBlowup";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DegenerateTube: return "DegenerateTube";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::UnknownExample: return "UnknownExample";
  }
  return "Unknown";
}

}  // namespace glift
