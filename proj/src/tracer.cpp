#include "glift/tracer.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "glift/certify.hpp"
#include "glift/error.hpp"
#include "glift/linalg.hpp"

namespace glift {

// ---------------------------------------------------------------------------
// Paths

PathSpec PathSpec::segment(Vector from, Vector to) {
  PathSpec s;
  s.kind = Kind::Segment;
  s.vertices = {std::move(from), std::move(to)};
  return s;
}

PathSpec PathSpec::polyline(std::vector<Vector> vertices) {
  PathSpec s;
  s.kind = Kind::Polyline;
  s.vertices = std::move(vertices);
  return s;
}

PathSpec PathSpec::circle(Vector center, double radius, double turns, double start_angle, Eigen::Index axis_i,
                          Eigen::Index axis_j) {
  PathSpec s;
  s.kind = Kind::Circle;
  s.center = std::move(center);
  s.radius = radius;
  s.turns = turns;
  s.start_angle = start_angle;
  s.axis_i = axis_i;
  s.axis_j = axis_j;
  return s;
}

PathSpec PathSpec::chart_line(Vector from_chart, Vector to_chart, std::shared_ptr<const Chart> chart) {
  PathSpec s;
  s.kind = Kind::ChartLine;
  s.vertices = {std::move(from_chart), std::move(to_chart)};
  s.chart = std::move(chart);
  return s;
}

PathSpec PathSpec::reversed() const {
  PathSpec r = *this;
  switch (kind) {
    case Kind::Circle:
      r.start_angle = start_angle + 2.0 * std::numbers::pi * turns;
      r.turns = -turns;
      break;
    default:
      std::reverse(r.vertices.begin(), r.vertices.end());
  }
  return r;
}

struct Path::Piece {
  enum class Shape { Line, Arc, ChartLine } shape = Shape::Line;
  Vector a, b;  // line / chart-line endpoints
  Vector center;
  double radius = 0.0, theta0 = 0.0, dtheta = 0.0;
  Eigen::Index i = 0, j = 1;
  std::shared_ptr<const Chart> chart;

  double length() const {
    switch (shape) {
      case Shape::Arc: return std::abs(radius * dtheta);
      default: return (b - a).norm();
    }
  }
  // s in [0, 1] is the local parameter.
  Vector at(double s) const {
    switch (shape) {
      case Shape::Line: return a + s * (b - a);
      case Shape::Arc: {
        Vector p = center;
        const double th = theta0 + s * dtheta;
        p(i) += radius * std::cos(th);
        p(j) += radius * std::sin(th);
        return p;
      }
      case Shape::ChartLine: return chart->inverse(a + s * (b - a));
    }
    return a;
  }
  Vector d_ds(double s) const {
    switch (shape) {
      case Shape::Line: return b - a;
      case Shape::Arc: {
        Vector v = Vector::Zero(center.size());
        const double th = theta0 + s * dtheta;
        v(i) = -radius * dtheta * std::sin(th);
        v(j) = radius * dtheta * std::cos(th);
        return v;
      }
      case Shape::ChartLine: {
        const Vector x = at(s);
        return solve_square(chart_jacobian(*chart, x), b - a);
      }
    }
    return a;
  }
};

Path::Path(const PathSpec& spec) {
  using Shape = Piece::Shape;
  std::vector<Piece> raw;
  switch (spec.kind) {
    case PathSpec::Kind::Segment:
    case PathSpec::Kind::Polyline: {
      if (spec.vertices.size() < 2) throw Error(ErrorKind::InvalidArgument, "path needs at least two vertices");
      if (spec.kind == PathSpec::Kind::Segment && spec.vertices.size() != 2) {
        throw Error(ErrorKind::InvalidArgument, "segment needs exactly two vertices");
      }
      for (std::size_t k = 1; k < spec.vertices.size(); ++k) {
        Piece pc;
        pc.shape = Shape::Line;
        pc.a = spec.vertices[k - 1];
        pc.b = spec.vertices[k];
        if (pc.a.size() != pc.b.size()) throw Error(ErrorKind::DimensionMismatch, "path vertices differ in dimension");
        if ((pc.a - pc.b).norm() == 0.0) throw Error(ErrorKind::InvalidArgument, "consecutive path vertices coincide");
        raw.push_back(std::move(pc));
      }
      break;
    }
    case PathSpec::Kind::Circle: {
      const Eigen::Index d = spec.center.size();
      if (spec.axis_i == spec.axis_j || spec.axis_i < 0 || spec.axis_j < 0 || spec.axis_i >= d || spec.axis_j >= d) {
        throw Error(ErrorKind::InvalidArgument, "circle plane axes invalid");
      }
      if (!(spec.radius > 0.0) || spec.turns == 0.0) throw Error(ErrorKind::InvalidArgument, "circle needs radius > 0, turns != 0");
      Piece pc;
      pc.shape = Shape::Arc;
      pc.center = spec.center;
      pc.radius = spec.radius;
      pc.theta0 = spec.start_angle;
      pc.dtheta = 2.0 * std::numbers::pi * spec.turns;
      pc.i = spec.axis_i;
      pc.j = spec.axis_j;
      raw.push_back(std::move(pc));
      break;
    }
    case PathSpec::Kind::ChartLine: {
      if (!spec.chart || spec.vertices.size() != 2) throw Error(ErrorKind::InvalidArgument, "chart line needs a chart and two points");
      Piece pc;
      pc.shape = Shape::ChartLine;
      pc.a = spec.vertices[0];
      pc.b = spec.vertices[1];
      pc.chart = spec.chart;
      if ((pc.a - pc.b).norm() == 0.0) throw Error(ErrorKind::InvalidArgument, "chart line endpoints coincide");
      raw.push_back(std::move(pc));
      break;
    }
  }

  double total = 0.0;
  for (const auto& pc : raw) total += pc.length();
  breaks_.push_back(0.0);
  double acc = 0.0;
  for (const auto& pc : raw) {
    acc += pc.length();
    breaks_.push_back(acc / total);
    pieces_.push_back(std::make_shared<const Piece>(pc));
  }
  breaks_.back() = 1.0;
  dim_ = pieces_.front()->at(0.0).size();
}

std::size_t Path::piece_at(double t) const {
  for (std::size_t k = 0; k + 1 < pieces(); ++k) {
    if (t < breaks_[k + 1]) return k;
  }
  return pieces() - 1;
}

Vector Path::point(std::size_t k, double t) const {
  const double s = (t - breaks_[k]) / (breaks_[k + 1] - breaks_[k]);
  return pieces_[k]->at(std::clamp(s, 0.0, 1.0));
}

Vector Path::velocity(std::size_t k, double t) const {
  const double s = (t - breaks_[k]) / (breaks_[k + 1] - breaks_[k]);
  return pieces_[k]->d_ds(std::clamp(s, 0.0, 1.0)) / (breaks_[k + 1] - breaks_[k]);
}

// ---------------------------------------------------------------------------
// Tracing

std::string_view to_string(TraceStatus s) {
  switch (s) {
    case TraceStatus::Completed: return "Completed";
    case TraceStatus::BoundaryEscape: return "BoundaryEscape";
    case TraceStatus::RankLoss: return "RankLoss";
    case TraceStatus::CorrectorDivergence: return "CorrectorDivergence";
    case TraceStatus::StepUnderflow: return "StepUnderflow";
  }
  return "StepUnderflow";
}

Vector davidenko_velocity(const ImplicitProblem& p, const Vector& x, const Vector& y, const Vector& x_dot) {
  Matrix s;
  try {
    s = left_inverse(jac_y(p, x, y));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RankDeficient) throw;
    throw Error(ErrorKind::RankLoss, "D_yF lost column rank in the predictor", e.value());
  }
  return -s * (jac_x(p, x, y) * x_dot);
}

namespace {

// Integrates the Davidenko field over [t0, t1] in one predictor step.
template <typename PointFn, typename VelocityFn>
Vector predict(const ImplicitProblem& p, Predictor kind, const PointFn& point, const VelocityFn& velocity, double t0,
               double t1, const Vector& y0) {
  const double h = t1 - t0;
  auto field = [&](double t, const Vector& y) { return davidenko_velocity(p, point(t), y, velocity(t)); };
  const Vector k1 = field(t0, y0);
  if (kind == Predictor::Euler) return y0 + h * k1;
  const double tm = t0 + 0.5 * h;
  const Vector k2 = field(tm, y0 + 0.5 * h * k1);
  const Vector k3 = field(tm, y0 + 0.5 * h * k2);
  const Vector k4 = field(t1, y0 + h * k3);
  return y0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct StepResult {
  Vector y;
  int iterations = 0;
  double residual = 0.0;
};

// Shared predictor-corrector core; throws on any failure.
template <typename PointFn, typename VelocityFn>
StepResult advance(const ImplicitProblem& p, const TracerOptions& opts, const PointFn& point,
                   const VelocityFn& velocity, double t0, double t1, const Vector& y0) {
  const Vector x1 = point(t1);
  const Vector y_pred = predict(p, opts.predictor, point, velocity, t0, t1, y0);
  const double predicted = (y_pred - y0).norm();
  if (!std::isfinite(predicted) || predicted > 10.0 * opts.trust_radius) {
    throw Error(ErrorKind::PredictorBlowup, "predicted |dy| = " + std::to_string(predicted), predicted);
  }
  if (!p.domain_y().contains(y_pred)) throw Error(ErrorKind::BoundaryEscape, "predictor left domain_y");

  CorrectorOptions copts = opts.corrector;
  copts.tol = std::min(copts.tol, opts.trace_tol);
  const Correction c = newton_correct(p, x1, y_pred, copts);
  // A correction larger than the prediction itself suggests a jump to another sheet.
  const double corrected = (c.y - y_pred).norm();
  if (corrected > 0.5 * predicted + std::sqrt(opts.trace_tol)) {
    throw Error(ErrorKind::NoConvergence, "corrector moved farther than the predictor step", corrected);
  }
  return {c.y, c.iterations, c.residual_norm};
}

TraceStatus status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BoundaryEscape:
    case ErrorKind::DomainViolation: return TraceStatus::BoundaryEscape;
    case ErrorKind::RankLoss:
    case ErrorKind::RankDeficient: return TraceStatus::RankLoss;
    case ErrorKind::NoConvergence: return TraceStatus::CorrectorDivergence;
    default: return TraceStatus::StepUnderflow;
  }
}

void validate_options(const TracerOptions& o) {
  if (!(o.trace_tol > 0.0) || !(0.0 < o.h_min && o.h_min <= o.h_init && o.h_init <= o.h_max && o.h_max <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "tracer options need 0 < h_min <= h_init <= h_max <= 1, trace_tol > 0");
  }
}

void attach_certificate(const ImplicitProblem& p, const TracerOptions& opts, TraceSample& s) {
  if (!opts.cert_charts || !opts.cert_weight) return;
  try {
    const GrowthTerms g = growth_terms(p, *opts.cert_charts, *opts.cert_weight, s.x, s.y);
    s.cert_lhs = g.lhs;
    s.cert_rhs = g.rhs;
  } catch (const Error&) {
    // Sample outside a chart domain: no certificate value.
  }
}

}  // namespace

Vector step(const ImplicitProblem& p, const Vector& x_t, const Vector& y_t, const Vector& x_next,
            const TracerOptions& opts) {
  if (x_t.size() != p.m() || x_next.size() != p.m() || y_t.size() != p.n()) {
    throw Error(ErrorKind::DimensionMismatch, "step: wrong dimensions");
  }
  const Vector dx = x_next - x_t;
  auto point = [&](double s) -> Vector { return x_t + s * dx; };
  auto velocity = [&](double) -> Vector { return dx; };
  const StepResult r = advance(p, opts, point, velocity, 0.0, 1.0, y_t);
  if (!(r.residual <= opts.trace_tol)) throw Error(ErrorKind::NoConvergence, "step residual above trace_tol", r.residual);
  return r.y;
}

Trace lift_path(const ImplicitProblem& p, const PathSpec& spec, const Vector& y_start, const TracerOptions& opts) {
  validate_options(opts);
  const Path path(spec);
  if (path.dim() != p.m() || y_start.size() != p.n()) throw Error(ErrorKind::DimensionMismatch, "lift_path: wrong dimensions");
  constexpr int kPathProbes = 256;
  for (std::size_t k = 0; k < path.pieces(); ++k) {
    for (int i = 0; i <= kPathProbes; ++i) {
      const double t = path.piece_begin(k) + (path.piece_end(k) - path.piece_begin(k)) * i / kPathProbes;
      if (!p.domain_x().contains(path.point(k, t))) {
        throw Error(ErrorKind::DomainViolation, "path leaves domain_x", t);
      }
    }
  }

  Trace trace;
  trace.m = p.m();
  trace.n = p.n();
  auto fail = [&](const Error& e, double t) {
    trace.status = status_for(e.kind());
    trace.failure_t = t;
    trace.message = e.what();
    return trace;
  };

  const Vector x0 = path.point(0, 0.0);
  Vector y;
  try {
    CorrectorOptions copts = opts.corrector;
    copts.tol = std::min(copts.tol, opts.trace_tol);
    y = newton_correct(p, x0, y_start, copts).y;
  } catch (const Error& e) {
    return fail(e, 0.0);
  }
  TraceSample first{0.0, x0, y, residual(p, x0, y).norm(), 0.0, {}, {}};
  attach_certificate(p, opts, first);
  trace.samples.push_back(std::move(first));

  double t = 0.0;
  double h = opts.h_init;
  int streak = 0;
  std::size_t piece = 0;
  while (t < 1.0) {
    const double end = path.piece_end(piece);
    if (t >= end) {
      ++piece;
      continue;
    }
    const bool to_end = h >= (end - t) * (1.0 - 1e-12);
    const double t_next = to_end ? end : t + h;
    auto point = [&](double s) { return path.point(piece, s); };
    auto velocity = [&](double s) { return path.velocity(piece, s); };
    try {
      const StepResult r = advance(p, opts, point, velocity, t, t_next, y);
      if (!(r.residual <= opts.trace_tol)) throw Error(ErrorKind::NoConvergence, "residual above trace_tol", r.residual);
      TraceSample s{t_next, point(t_next), r.y, r.residual, t_next - t, {}, {}};
      attach_certificate(p, opts, s);
      trace.samples.push_back(std::move(s));
      y = r.y;
      t = t_next;
      streak = r.iterations <= 2 ? streak + 1 : 0;
      if (streak >= 3) {
        h = std::min(1.5 * h, opts.h_max);
        streak = 0;
      }
    } catch (const Error& e) {
      streak = 0;
      h = 0.5 * (t_next - t);
      if (h < opts.h_min) return fail(e, t);
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TraceStatus status_from_string(const std::string& s) {
  for (auto st : {TraceStatus::Completed, TraceStatus::BoundaryEscape, TraceStatus::RankLoss,
                  TraceStatus::CorrectorDivergence, TraceStatus::StepUnderflow}) {
    if (to_string(st) == s) return st;
  }
  throw Error(ErrorKind::ConfigParse, "unknown trace status '" + s + "'");
}

}  // namespace

std::string trace_to_csv(const Trace& trace) {
  std::ostringstream os;
  os << "t";
  for (Eigen::Index i = 0; i < trace.m; ++i) os << ",x_" << i + 1;
  for (Eigen::Index i = 0; i < trace.n; ++i) os << ",y_" << i + 1;
  os << ",residual,step,cert_lhs,cert_rhs\n";
  for (const auto& s : trace.samples) {
    os << num17(s.t);
    for (Eigen::Index i = 0; i < trace.m; ++i) os << ',' << num17(s.x(i));
    for (Eigen::Index i = 0; i < trace.n; ++i) os << ',' << num17(s.y(i));
    os << ',' << num17(s.residual) << ',' << num17(s.step) << ',';
    if (s.cert_lhs) os << num17(*s.cert_lhs);
    os << ',';
    if (s.cert_rhs) os << num17(*s.cert_rhs);
    os << '\n';
  }
  return os.str();
}

Trace trace_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ConfigParse, "empty trace CSV");
  Trace trace;
  for (std::size_t pos = 0; (pos = line.find(",x_", pos)) != std::string::npos; ++pos) ++trace.m;
  for (std::size_t pos = 0; (pos = line.find(",y_", pos)) != std::string::npos; ++pos) ++trace.n;
  const std::size_t columns = 1 + trace.m + trace.n + 4;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != columns) throw Error(ErrorKind::ConfigParse, "trace CSV row has wrong number of cells");
    TraceSample s;
    std::size_t c = 0;
    s.t = std::stod(cells[c++]);
    s.x.resize(trace.m);
    s.y.resize(trace.n);
    for (Eigen::Index i = 0; i < trace.m; ++i) s.x(i) = std::stod(cells[c++]);
    for (Eigen::Index i = 0; i < trace.n; ++i) s.y(i) = std::stod(cells[c++]);
    s.residual = std::stod(cells[c++]);
    s.step = std::stod(cells[c++]);
    if (!cells[c].empty()) s.cert_lhs = std::stod(cells[c]);
    ++c;
    if (!cells[c].empty()) s.cert_rhs = std::stod(cells[c]);
    trace.samples.push_back(std::move(s));
  }
  return trace;
}

nlohmann::json trace_to_json(const Trace& trace) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : trace.samples) {
    nlohmann::json j;
    j["t"] = s.t;
    j["x"] = std::vector<double>(s.x.data(), s.x.data() + s.x.size());
    j["y"] = std::vector<double>(s.y.data(), s.y.data() + s.y.size());
    j["residual"] = s.residual;
    j["step"] = s.step;
    j["cert_lhs"] = s.cert_lhs ? nlohmann::json(*s.cert_lhs) : nlohmann::json(nullptr);
    j["cert_rhs"] = s.cert_rhs ? nlohmann::json(*s.cert_rhs) : nlohmann::json(nullptr);
    samples.push_back(std::move(j));
  }
  return {{"m", trace.m},
          {"n", trace.n},
          {"status", std::string(to_string(trace.status))},
          {"failure_t", trace.failure_t},
          {"message", trace.message},
          {"samples", std::move(samples)}};
}

Trace trace_from_json(const nlohmann::json& j) {
  Trace trace;
  try {
    trace.m = j.at("m").get<Eigen::Index>();
    trace.n = j.at("n").get<Eigen::Index>();
    trace.status = status_from_string(j.at("status").get<std::string>());
    trace.failure_t = j.value("failure_t", 0.0);
    trace.message = j.value("message", std::string());
    for (const auto& js : j.at("samples")) {
      TraceSample s;
      s.t = js.at("t").get<double>();
      const auto x = js.at("x").get<std::vector<double>>();
      const auto y = js.at("y").get<std::vector<double>>();
      s.x = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
      s.y = Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
      s.residual = js.at("residual").get<double>();
      s.step = js.at("step").get<double>();
      if (js.contains("cert_lhs") && !js["cert_lhs"].is_null()) s.cert_lhs = js["cert_lhs"].get<double>();
      if (js.contains("cert_rhs") && !js["cert_rhs"].is_null()) s.cert_rhs = js["cert_rhs"].get<double>();
      trace.samples.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigParse, std::string("trace JSON: ") + e.what());
  }
  return trace;
}

}  // namespace glift
