#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace glift {

enum class ErrorKind {
  InvalidArgument,
  NonFinite,
  DimensionMismatch,
  RankDeficient,
  DomainViolation,
  SeedNotOnZ,
  SeedRankDeficient,
  ChartDomainMismatch,
  NonMonotone,
  NonPositiveValue,
  NoConvergence,
  RankLoss,
  BoundaryEscape,
  PredictorBlowup,
  Unreachable,
  InvalidParams,
  DegenerateTube,
  ConfigParse,
  UnknownExample,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library. `kind` identifies the failure,
/// `value` carries the offending quantity where one exists (e.g. the smallest
/// singular value for RankDeficient, the path parameter for Unreachable).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double value = 0.0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

}  // namespace glift
