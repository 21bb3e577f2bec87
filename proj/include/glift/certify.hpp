#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "glift/charts.hpp"
#include "glift/tracer.hpp"
#include "glift/weights.hpp"

namespace glift {

/// One audited hypothesis. Sign convention: margin >= 0 means the sample
/// satisfies it; the verdict is Pass iff worst_margin >= -kVerdictSlack.
struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Pass;
  double worst_margin = kInf;
  Vector worst_x;
  Vector worst_y;
  std::size_t samples_checked = 0;
  std::vector<double> lhs;  // per sample, where the check has one
  std::vector<double> rhs;
  std::vector<double> margin;

  bool passed() const { return verdict != Verdict::Fail; }
};

struct CertificateReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

/// Left and right sides of the growth bound at one point:
///   lhs = |Dpsi(y) S(x, y)| * |D_xF(x, y) Dphi(x)^{-1}|,  rhs = omega(|psi(y)|).
struct GrowthTerms {
  double lhs = 0.0;
  double rhs = 0.0;
};
GrowthTerms growth_terms(const ImplicitProblem& p, const ChartPair& charts, const Weight& w, const Vector& x,
                         const Vector& y);

struct CertifyOptions {
  bool refine_midpoints = false;  // also check corrected midpoints between samples
};

CheckResult growth_bound_check(const ImplicitProblem& p, const Trace& trace, const ChartPair& charts, const Weight& w,
                               const CertifyOptions& opts = {});

/// margin = sigma_min(D_yF) - sigma_floor; the default floor is
/// 1e-6 * max sampled |D_yF|.
CheckResult left_invertibility_check(const ImplicitProblem& p, const Trace& trace,
                                     std::optional<double> sigma_floor = std::nullopt,
                                     const CertifyOptions& opts = {});

/// margin = M - |S| |D_xF| (square systems only).
CheckResult uniform_bound_check(const ImplicitProblem& p, const Trace& trace, double bound,
                                 const CertifyOptions& opts = {});

/// margin = min_i (|J_ii| - sum_{j != i} |J_ij|) - d with J = D_yF (square systems only).
CheckResult diagonal_dominance_check(const ImplicitProblem& p, const std::vector<std::pair<Vector, Vector>>& points,
                                     double d);

/// Transfer factor |Dpsi^ Dpsi^{-1}| |Dphi Dphi^^{-1}| between two chart pairs.
/// Reports numbers only, never a verdict.
struct ProbeResult {
  double max_factor = 0.0;
  double min_factor = kInf;
  std::vector<double> factor;
  std::size_t samples_checked = 0;
};
ProbeResult chart_independence_probe(const Trace& trace, const ChartPair& charts, const ChartPair& alt);

nlohmann::json to_json(const CheckResult& r);
nlohmann::json to_json(const CertificateReport& r);
nlohmann::json to_json(const ProbeResult& r);

}  // namespace glift
