#include "glift/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "glift/error.hpp"

namespace glift {

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Weight constant_weight(double c) {
  return {WeightKind::Constant, "constant:" + fmt_num(c), [c](double) { return c; }};
}

Weight affine_weight(double slope, double intercept) {
  return {WeightKind::Affine, "affine:" + fmt_num(slope) + "," + fmt_num(intercept),
          [slope, intercept](double t) { return slope * t + intercept; }};
}

Weight tabulated_weight(std::vector<double> t, std::vector<double> w) {
  if (t.size() != w.size() || t.size() < 2) throw Error(ErrorKind::InvalidArgument, "weight table needs >= 2 rows");
  if (t.front() != 0.0) throw Error(ErrorKind::InvalidArgument, "weight table must start at t = 0");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw Error(ErrorKind::InvalidArgument, "weight table abscissae must increase");
  }
  auto fn = [t = std::move(t), w = std::move(w)](double s) {
    if (s >= t.back()) return w.back();
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double lam = (s - t[k - 1]) / (t[k] - t[k - 1]);
    return (1.0 - lam) * w[k - 1] + lam * w[k];
  };
  return {WeightKind::Tabulated, "table", std::move(fn)};
}

Weight user_weight(std::string name, std::function<double(double)> fn) {
  return {WeightKind::UserFunction, std::move(name), std::move(fn)};
}

Weight parse_weight(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::ConfigParse, "weight spec needs kind:args, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  try {
    if (kind == "constant") return constant_weight(std::stod(args));
    if (kind == "affine") {
      const auto comma = args.find(',');
      if (comma == std::string::npos) throw Error(ErrorKind::ConfigParse, "affine weight needs a,b");
      return affine_weight(std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::ConfigParse, "bad number in weight spec '" + spec + "'");
  }
  if (kind == "table") {
    std::ifstream in(args);
    if (!in) throw Error(ErrorKind::ConfigParse, "cannot open weight table " + args);
    std::vector<double> t, w;
    double a = 0.0, b = 0.0;
    while (in >> a >> b) {
      t.push_back(a);
      w.push_back(b);
    }
    Weight out = tabulated_weight(std::move(t), std::move(w));
    out.name = spec;
    return out;
  }
  throw Error(ErrorKind::ConfigParse, "unknown weight kind '" + kind + "'");
}

double evaluate(const Weight& w, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "weight argument must be >= 0", t);
  const double v = w.fn(t);
  if (!(v > 0.0)) throw Error(ErrorKind::NonPositiveValue, w.name + " is not positive", t);
  return v;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::HeuristicPass: return "heuristic-pass";
  }
  return "fail";
}

namespace {

// t_0 = 0 followed by geometric spacing from T * 1e-6 up to T.
std::vector<double> geometric_grid(double grid_max, std::size_t samples) {
  std::vector<double> t(samples, 0.0);
  const double first = grid_max * 1e-6;
  const std::size_t k_max = samples - 2;
  for (std::size_t k = 1; k < samples; ++k) {
    t[k] = k_max == 0 ? grid_max : first * std::pow(grid_max / first, double(k - 1) / double(k_max));
  }
  t.back() = grid_max;
  return t;
}

double trapezoid_reciprocal(const std::vector<double>& t, const std::vector<double>& w, double upto) {
  double acc = 0.0;
  for (std::size_t k = 1; k < t.size() && t[k - 1] < upto; ++k) {
    const double hi = std::min(t[k], upto);
    const double lam = (hi - t[k - 1]) / (t[k] - t[k - 1]);
    const double w_hi = (1.0 - lam) * w[k - 1] + lam * w[k];
    acc += 0.5 * (hi - t[k - 1]) * (1.0 / w[k - 1] + 1.0 / w_hi);
  }
  return acc;
}

}  // namespace

AdmissibilityReport check_weight(const Weight& w, double grid_max, std::size_t samples) {
  if (!(grid_max > 0.0) || samples < 2) throw Error(ErrorKind::InvalidArgument, "check_weight needs T > 0 and >= 2 samples");
  AdmissibilityReport report;
  const std::vector<double> t = geometric_grid(grid_max, samples);
  std::vector<double> values(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) values[k] = w.fn(t[k]);

  report.min_value = *std::min_element(values.begin(), values.end());
  report.positive = report.min_value > 0.0;
  report.nondecreasing = true;
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (values[k] < values[k - 1] - 1e-12) {
      report.nondecreasing = false;
      report.worst_decrease_at = t[k];
      break;
    }
  }

  if (report.positive) {
    report.integral_full = trapezoid_reciprocal(t, values, grid_max);
    report.integral_half = trapezoid_reciprocal(t, values, 0.5 * grid_max);
  }
  if (w.kind == WeightKind::Constant || w.kind == WeightKind::Affine) {
    report.divergent = report.positive;
  } else {
    report.divergence_heuristic = true;
    const double scale = report.positive ? values.front() : 1.0;
    report.divergent = report.positive &&
                       report.integral_full >= 0.5 * std::log1p(grid_max) / scale &&
                       report.integral_half >= 0.5 * std::log1p(0.5 * grid_max) / scale;
  }

  if (!report.positive || !report.nondecreasing || !report.divergent) {
    report.verdict = Verdict::Fail;
  } else {
    report.verdict = report.divergence_heuristic ? Verdict::HeuristicPass : Verdict::Pass;
  }
  return report;
}

}  // namespace glift
