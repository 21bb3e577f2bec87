#pragma once

#include <functional>
#include <string>
#include <vector>

#include "glift/types.hpp"

namespace glift {

enum class WeightKind { Constant, Affine, Tabulated, UserFunction };

/// Candidate weight omega: [0, inf) -> (0, inf).
struct Weight {
  WeightKind kind = WeightKind::Constant;
  std::string name;
  std::function<double(double)> fn;
};

Weight constant_weight(double c);
/// omega(t) = slope * t + intercept.
Weight affine_weight(double slope, double intercept);
/// Piecewise-linear interpolation of (t_i, w_i), held constant past the last node.
Weight tabulated_weight(std::vector<double> t, std::vector<double> w);
Weight user_weight(std::string name, std::function<double(double)> fn);

/// Parses "constant:c", "affine:a,b" or "table:path" (two whitespace-separated columns).
Weight parse_weight(const std::string& spec);

/// omega(t); throws InvalidArgument for t < 0 and NonPositiveValue for omega(t) <= 0.
double evaluate(const Weight& w, double t);

enum class Verdict { Pass, Fail, HeuristicPass };
std::string_view to_string(Verdict v);

struct AdmissibilityReport {
  double min_value = kInf;
  bool positive = false;
  bool nondecreasing = false;
  bool divergent = false;
  bool divergence_heuristic = false;  // true when `divergent` comes from sampling
  double integral_full = 0.0;         // trapezoid integral of 1/omega on [0, T]
  double integral_half = 0.0;         // same on [0, T/2]
  double worst_decrease_at = 0.0;
  Verdict verdict = Verdict::Fail;

  bool admissible() const { return verdict != Verdict::Fail; }
};

constexpr std::size_t kWeightSamples = 1024;

/// Samples omega on a geometric grid over [0, T] and audits positivity,
/// monotonicity and divergence of the integral of 1/omega. Divergence is exact
/// for constant and affine weights; otherwise both integrals over [0, T] and
/// [0, T/2] must reach 0.5 * log(1 + s) / omega(0) at s = T and s = T/2.
AdmissibilityReport check_weight(const Weight& w, double grid_max, std::size_t samples = kWeightSamples);

}  // namespace glift
