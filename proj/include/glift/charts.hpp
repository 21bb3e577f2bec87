#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "glift/problem.hpp"

namespace glift {

/// Diffeomorphism from an open domain onto (a subset of) R^dim.
struct Chart {
  using Map = std::function<Vector(const Vector&)>;
  using JacobianMap = std::function<Matrix(const Vector&)>;

  std::string name;
  Eigen::Index dim = 0;
  Map forward;
  Map inverse;
  JacobianMap jac_forward;  // optional, finite differences otherwise
  Domain domain;
};

struct ChartPair {
  Chart phi;  // acts on x
  Chart psi;  // acts on y
};

constexpr double kRoundtripTol = 1e-8;

Chart identity_chart(Eigen::Index dim);
/// p -> A p + b with A invertible.
Chart affine_chart(const Matrix& a, const Vector& b);
/// Maps the open box onto R^d componentwise: tan(pi (2t - a - b) / (2 (b - a))) on
/// finite intervals, log(t - a) / -log(b - t) on half lines, identity on R.
Chart tangent_box_chart(const Box& box);

/// Strictly monotone scalar map with optional derivative and inverse.
struct ScalarMap {
  std::function<double(double)> value;
  std::function<double(double)> derivative;  // optional
  std::function<double(double)> inverse;     // optional, bracketed solve otherwise
};

/// psi = phi o f for scalar f on the interval `domain`; Dpsi = (Dphi o f) f'.
/// Throws NonMonotone if sampled f' changes sign or vanishes.
Chart psi_from_scalar_solution(const Chart& phi, const ScalarMap& f, const Box& domain);

/// Solves f(v) = target for v in the open interval (lo, hi), f monotone.
double invert_monotone(const ScalarMap& f, double target, double lo, double hi);

/// Forward map with a domain check (ChartDomainMismatch when outside).
Vector chart_forward(const Chart& c, const Vector& p);
/// Dphi(p), analytic or central differences.
Matrix chart_jacobian(const Chart& c, const Vector& p);

/// F~(x~, y~) = F(phi^{-1}(x~), psi^{-1}(y~)) with chain-rule Jacobians
/// D_x~F~ = D_xF (Dphi)^{-1} and D_y~F~ = D_yF (Dpsi)^{-1}. Seeds are mapped
/// through (phi, psi); transformed domains are the chart images.
ImplicitProblem transformed_problem(const ImplicitProblem& p, const ChartPair& charts);

struct RoundtripReport {
  std::size_t samples = 0;
  std::size_t failures = 0;
  double max_roundtrip_error = 0.0;  // max |inv(fwd(p)) - p| / max(1, |p|)
  double max_jacobian_error = 0.0;   // max |Dphi(p) * Dnum(phi^{-1})(phi(p)) - I|
  double min_sigma = kInf;           // min sigma_min(Dphi) over samples
  Vector worst_point;
  bool passed = true;
};

constexpr double kChartJacobianTol = 1e-5;

RoundtripReport chart_roundtrip_check(const Chart& c, const std::vector<Vector>& samples);

}  // namespace glift
