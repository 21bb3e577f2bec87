#include "glift/certify.hpp"

#include <algorithm>
#include <cmath>

#include "glift/corrector.hpp"
#include "glift/error.hpp"
#include "glift/linalg.hpp"

namespace glift {

bool CertificateReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

const CheckResult* CertificateReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

GrowthTerms growth_terms(const ImplicitProblem& p, const ChartPair& charts, const Weight& w, const Vector& x,
                         const Vector& y) {
  const Matrix dphi = chart_jacobian(charts.phi, x);
  const Matrix dpsi = chart_jacobian(charts.psi, y);
  const Matrix s = left_inverse(jac_y(p, x, y));
  const Matrix fx_dphi_inv = right_solve(jac_x(p, x, y), dphi);
  GrowthTerms g;
  g.lhs = spectral_norm(dpsi * s) * spectral_norm(fx_dphi_inv);
  g.rhs = evaluate(w, chart_forward(charts.psi, y).norm());
  return g;
}

namespace {

using Points = std::vector<std::pair<Vector, Vector>>;

// Trace samples, optionally interleaved with corrected midpoints.
Points sample_points(const ImplicitProblem& p, const Trace& trace, const CertifyOptions& opts) {
  Points pts;
  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    const auto& s = trace.samples[k];
    if (opts.refine_midpoints && k > 0) {
      const auto& prev = trace.samples[k - 1];
      const Vector xm = 0.5 * (prev.x + s.x);
      try {
        pts.emplace_back(xm, newton_correct(p, xm, 0.5 * (prev.y + s.y)).y);
      } catch (const Error&) {
        // midpoint not recoverable; the endpoints still get checked
      }
    }
    pts.emplace_back(s.x, s.y);
  }
  return pts;
}

void record(CheckResult& r, const Vector& x, const Vector& y, double lhs, double rhs, double margin) {
  ++r.samples_checked;
  r.lhs.push_back(lhs);
  r.rhs.push_back(rhs);
  r.margin.push_back(margin);
  if (margin < r.worst_margin || r.samples_checked == 1) {
    r.worst_margin = margin;
    r.worst_x = x;
    r.worst_y = y;
  }
}

void finish(CheckResult& r) {
  r.verdict = (r.samples_checked > 0 && r.worst_margin >= -kVerdictSlack) ? Verdict::Pass : Verdict::Fail;
}

void require_square(const ImplicitProblem& p, const char* who) {
  if (p.l() != p.n()) throw Error(ErrorKind::DimensionMismatch, std::string(who) + " needs l = n");
}

}  // namespace

CheckResult growth_bound_check(const ImplicitProblem& p, const Trace& trace, const ChartPair& charts, const Weight& w,
                               const CertifyOptions& opts) {
  if (charts.phi.dim != p.m() || charts.psi.dim != p.n()) {
    throw Error(ErrorKind::ChartDomainMismatch, "chart dimensions do not match the problem");
  }
  CheckResult r;
  r.name = "growth_bound";
  for (const auto& [x, y] : sample_points(p, trace, opts)) {
    const GrowthTerms g = growth_terms(p, charts, w, x, y);
    record(r, x, y, g.lhs, g.rhs, g.rhs - g.lhs);
  }
  finish(r);
  return r;
}

CheckResult left_invertibility_check(const ImplicitProblem& p, const Trace& trace, std::optional<double> sigma_floor,
                                     const CertifyOptions& opts) {
  CheckResult r;
  r.name = "left_invertibility";
  const Points pts = sample_points(p, trace, opts);
  std::vector<Matrix> jacs;
  double scale = 0.0;
  for (const auto& [x, y] : pts) {
    jacs.push_back(jac_y(p, x, y));
    scale = std::max(scale, spectral_norm(jacs.back()));
  }
  const double floor = sigma_floor.value_or(1e-6 * scale);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double smin = smallest_singular_value(jacs[k]);
    record(r, pts[k].first, pts[k].second, smin, floor, smin - floor);
  }
  finish(r);
  return r;
}

CheckResult uniform_bound_check(const ImplicitProblem& p, const Trace& trace, double bound,
                                 const CertifyOptions& opts) {
  require_square(p, "uniform_bound_check");
  CheckResult r;
  r.name = "uniform_bound";
  for (const auto& [x, y] : sample_points(p, trace, opts)) {
    const double lhs = spectral_norm(left_inverse(jac_y(p, x, y))) * spectral_norm(jac_x(p, x, y));
    record(r, x, y, lhs, bound, bound - lhs);
  }
  finish(r);
  return r;
}

CheckResult diagonal_dominance_check(const ImplicitProblem& p, const Points& points, double d) {
  require_square(p, "diagonal_dominance_check");
  CheckResult r;
  r.name = "diagonal_dominance";
  for (const auto& [x, y] : points) {
    const Matrix j = jac_y(p, x, y);
    double excess = kInf;
    for (Eigen::Index i = 0; i < j.rows(); ++i) {
      const double off = j.row(i).cwiseAbs().sum() - std::abs(j(i, i));
      excess = std::min(excess, std::abs(j(i, i)) - off);
    }
    record(r, x, y, excess, d, excess - d);
  }
  finish(r);
  return r;
}

ProbeResult chart_independence_probe(const Trace& trace, const ChartPair& charts, const ChartPair& alt) {
  ProbeResult r;
  for (const auto& s : trace.samples) {
    const Matrix psi_transfer = right_solve(chart_jacobian(alt.psi, s.y), chart_jacobian(charts.psi, s.y));
    const Matrix phi_transfer = right_solve(chart_jacobian(charts.phi, s.x), chart_jacobian(alt.phi, s.x));
    const double f = spectral_norm(psi_transfer) * spectral_norm(phi_transfer);
    r.factor.push_back(f);
    r.max_factor = std::max(r.max_factor, f);
    r.min_factor = std::min(r.min_factor, f);
    ++r.samples_checked;
  }
  return r;
}

namespace {

nlohmann::json vec(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Infinite margins (no samples) are not representable in JSON.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json to_json(const CheckResult& r) {
  return {{"name", r.name},
          {"verdict", std::string(to_string(r.verdict))},
          {"worst_margin", num(r.worst_margin)},
          {"worst_x", vec(r.worst_x)},
          {"worst_y", vec(r.worst_y)},
          {"samples_checked", r.samples_checked}};
}

nlohmann::json to_json(const CertificateReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"passed", r.passed()}, {"checks", std::move(checks)}};
}

nlohmann::json to_json(const ProbeResult& r) {
  return {{"max_factor", num(r.max_factor)}, {"min_factor", num(r.min_factor)}, {"samples_checked", r.samples_checked}};
}

}  // namespace glift
