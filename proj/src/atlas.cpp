#include "glift/atlas.hpp"

#include <cmath>

#include "glift/corrector.hpp"
#include "glift/error.hpp"
#include "glift/linalg.hpp"

namespace glift {

namespace {

nlohmann::json vec(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector from_json_vec(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

CorrectorOptions corrector_for(const TracerOptions& o) {
  CorrectorOptions c = o.corrector;
  c.tol = std::min(c.tol, o.trace_tol);
  return c;
}

}  // namespace

SolutionAtlas::SolutionAtlas(std::shared_ptr<const ImplicitProblem> problem, TracerOptions opts,
                             std::optional<Chart> planning_chart)
    : problem_(std::move(problem)), opts_(std::move(opts)), chart_(std::move(planning_chart)) {
  if (!problem_) throw Error(ErrorKind::InvalidArgument, "atlas needs a problem");
  validate_seed(*problem_);
  if (chart_) {
    if (chart_->dim != problem_->m()) throw Error(ErrorKind::ChartDomainMismatch, "planning chart dimension");
    chart_ptr_ = std::make_shared<const Chart>(*chart_);
  }
  snap_radius_ = 1e-6 * std::max(1.0, problem_->seed_x().norm());
  cache_.push_back({problem_->seed_x(), problem_->seed_y()});
}

std::size_t SolutionAtlas::nearest(const Vector& x) const {
  const Vector target = chart_ ? chart_forward(*chart_, x) : x;
  std::size_t best = 0;
  double best_d = kInf;
  for (std::size_t k = 0; k < cache_.size(); ++k) {
    const Vector c = chart_ ? chart_->forward(cache_[k].x) : cache_[k].x;
    const double d = (c - target).norm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

void SolutionAtlas::insert(const Vector& x, const Vector& y) {
  for (const auto& e : cache_) {
    if ((e.x - x).norm() <= snap_radius_) return;
  }
  cache_.push_back({x, y});
}

PathSpec SolutionAtlas::plan(const Vector& x) const {
  const Vector& from = cache_[nearest(x)].x;
  if (chart_) return PathSpec::chart_line(chart_->forward(from), chart_forward(*chart_, x), chart_ptr_);
  return PathSpec::segment(from, x);
}

Vector SolutionAtlas::evaluate(const Vector& x) {
  if (x.size() != problem_->m()) throw Error(ErrorKind::DimensionMismatch, "evaluate: wrong x dimension");
  if (!problem_->domain_x().contains(x)) throw Error(ErrorKind::DomainViolation, "evaluate: x outside domain_x");
  const Entry& near = cache_[nearest(x)];
  const double d = (near.x - x).norm();
  if (d == 0.0) return near.y;
  if (d <= snap_radius_) {
    try {
      return newton_correct(*problem_, x, near.y, corrector_for(opts_)).y;
    } catch (const Error& e) {
      throw Error(ErrorKind::Unreachable, std::string("re-correction failed: ") + e.what());
    }
  }

  Trace trace;
  try {
    trace = lift_path(*problem_, plan(x), near.y, opts_);
  } catch (const Error& e) {
    throw Error(ErrorKind::Unreachable, e.what());
  }
  if (!trace.completed()) {
    throw Error(ErrorKind::Unreachable, std::string(to_string(trace.status)) + " at t = " +
                                            std::to_string(trace.failure_t) + ": " + trace.message,
                trace.failure_t);
  }
  // Chart-line endpoints carry roundoff from phi^{-1}(phi(x)); finish at x itself.
  Vector y;
  try {
    y = newton_correct(*problem_, x, trace.back().y, corrector_for(opts_)).y;
  } catch (const Error& e) {
    throw Error(ErrorKind::Unreachable, std::string("final correction failed: ") + e.what());
  }
  for (std::size_t k = 1; k + 1 < trace.samples.size(); ++k) insert(trace.samples[k].x, trace.samples[k].y);
  // The target itself always becomes an exact key so a repeat call is a bit-identical hit.
  for (std::size_t k = cache_.size(); k-- > 1;) {
    if ((cache_[k].x - x).norm() <= snap_radius_) cache_.erase(cache_.begin() + static_cast<std::ptrdiff_t>(k));
  }
  cache_.push_back({x, y});
  return y;
}

Matrix SolutionAtlas::derivative(const Vector& x) {
  const Vector y = evaluate(x);
  return -left_inverse(jac_y(*problem_, x, y)) * jac_x(*problem_, x, y);
}

Trace SolutionAtlas::lift(const PathSpec& path) {
  const Path rendered(path);
  const Vector y0 = evaluate(rendered.point(0.0));
  return lift_path(*problem_, path, y0, opts_);
}

nlohmann::json SolutionAtlas::to_json() const {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& e : cache_) samples.push_back({{"x", vec(e.x)}, {"y", vec(e.y)}});
  return {{"problem", problem_->name()},
          {"params", problem_->params()},
          {"snap_radius", snap_radius_},
          {"samples", std::move(samples)}};
}

SolutionAtlas SolutionAtlas::from_json(const nlohmann::json& j, const Resolver& resolve, TracerOptions opts) {
  std::shared_ptr<const ImplicitProblem> problem;
  std::vector<Entry> entries;
  try {
    problem = resolve(j.at("problem").get<std::string>(), j.at("params").get<std::map<std::string, double>>());
    for (const auto& s : j.at("samples")) entries.push_back({from_json_vec(s.at("x")), from_json_vec(s.at("y"))});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigParse, std::string("atlas JSON: ") + e.what());
  }
  SolutionAtlas atlas(problem, opts);
  for (const auto& e : entries) {
    if (e.x.size() != problem->m() || e.y.size() != problem->n()) {
      throw Error(ErrorKind::DimensionMismatch, "atlas JSON sample dimensions");
    }
    const double r = residual(*problem, e.x, e.y).norm();
    if (!(r <= atlas.opts_.trace_tol)) throw Error(ErrorKind::SeedNotOnZ, "atlas JSON sample off the zero set", r);
    atlas.insert(e.x, e.y);
  }
  return atlas;
}

PathIndependenceReport path_independence_check(SolutionAtlas& atlas, const Vector& x_target,
                                               const std::vector<PathSpec>& paths) {
  if (paths.size() < 2) throw Error(ErrorKind::InvalidArgument, "path independence needs at least two paths");
  PathIndependenceReport report;
  report.threshold = 100.0 * atlas.options().trace_tol;
  for (const auto& spec : paths) {
    const Path rendered(spec);
    if ((rendered.point(1.0) - x_target).norm() > atlas.snap_radius()) {
      throw Error(ErrorKind::InvalidArgument, "path does not end at the target");
    }
    const Trace t = atlas.lift(spec);
    if (!t.completed()) {
      throw Error(ErrorKind::Unreachable, std::string(to_string(t.status)) + ": " + t.message, t.failure_t);
    }
    report.endpoints.push_back(t.back().y);
  }
  for (std::size_t a = 0; a < report.endpoints.size(); ++a) {
    for (std::size_t b = a + 1; b < report.endpoints.size(); ++b) {
      report.max_gap = std::max(report.max_gap, (report.endpoints[a] - report.endpoints[b]).norm());
    }
  }
  report.passed = report.max_gap <= report.threshold;
  return report;
}

MonodromyResult monodromy_check(SolutionAtlas& atlas, const PathSpec& loop) {
  const Path rendered(loop);
  if ((rendered.point(0.0) - rendered.point(1.0)).norm() > atlas.snap_radius()) {
    throw Error(ErrorKind::InvalidArgument, "monodromy loop is not closed");
  }
  MonodromyResult r;
  r.threshold = 100.0 * atlas.options().trace_tol;
  r.trace = atlas.lift(loop);
  if (!r.trace.completed()) {
    throw Error(ErrorKind::Unreachable, std::string(to_string(r.trace.status)) + ": " + r.trace.message,
                r.trace.failure_t);
  }
  r.delta = r.trace.back().y - r.trace.samples.front().y;
  r.gap = r.delta.norm();
  r.closed = r.gap <= r.threshold;
  return r;
}

}  // namespace glift
