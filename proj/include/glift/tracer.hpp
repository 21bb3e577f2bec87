#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "glift/charts.hpp"
#include "glift/corrector.hpp"
#include "glift/problem.hpp"
#include "glift/weights.hpp"

namespace glift {

/// Piecewise-C1 path in x-space parametrized by t in [0, 1]. Each piece gets
/// a share of [0, 1] proportional to its length and is traversed at constant
/// speed (constant angular speed for arcs, constant speed in chart
/// coordinates for chart lines).
struct PathSpec {
  enum class Kind { Polyline, Segment, Circle, ChartLine };

  Kind kind = Kind::Segment;
  std::vector<Vector> vertices;  // polyline and segment; chart coordinates for chart lines
  Vector center;
  double radius = 1.0;
  double turns = 1.0;  // signed: negative runs clockwise in the (axis_i, axis_j) plane
  double start_angle = 0.0;
  Eigen::Index axis_i = 0;
  Eigen::Index axis_j = 1;
  std::shared_ptr<const Chart> chart;

  static PathSpec segment(Vector from, Vector to);
  static PathSpec polyline(std::vector<Vector> vertices);
  static PathSpec circle(Vector center, double radius, double turns, double start_angle = 0.0,
                         Eigen::Index axis_i = 0, Eigen::Index axis_j = 1);
  static PathSpec chart_line(Vector from_chart, Vector to_chart, std::shared_ptr<const Chart> chart);

  PathSpec reversed() const;
};

/// Rendered form of a PathSpec.
class Path {
 public:
  explicit Path(const PathSpec& spec);

  Eigen::Index dim() const { return dim_; }
  std::size_t pieces() const { return breaks_.size() - 1; }
  double piece_begin(std::size_t k) const { return breaks_[k]; }
  double piece_end(std::size_t k) const { return breaks_[k + 1]; }
  std::size_t piece_at(double t) const;

  Vector point(double t) const { return point(piece_at(t), t); }
  /// Position and d/dt on piece k (t may sit on either end of the piece).
  Vector point(std::size_t k, double t) const;
  Vector velocity(std::size_t k, double t) const;

 private:
  struct Piece;
  Eigen::Index dim_ = 0;
  std::vector<double> breaks_;
  std::vector<std::shared_ptr<const Piece>> pieces_;
};

enum class TraceStatus { Completed, BoundaryEscape, RankLoss, CorrectorDivergence, StepUnderflow };
std::string_view to_string(TraceStatus s);

struct TraceSample {
  double t = 0.0;
  Vector x;
  Vector y;
  double residual = 0.0;
  double step = 0.0;
  std::optional<double> cert_lhs;
  std::optional<double> cert_rhs;
};

struct Trace {
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  std::vector<TraceSample> samples;
  TraceStatus status = TraceStatus::Completed;
  double failure_t = 0.0;
  std::string message;

  bool completed() const { return status == TraceStatus::Completed; }
  const TraceSample& back() const { return samples.back(); }
};

enum class Predictor { Euler, RK4 };

struct TracerOptions {
  double trace_tol = 1e-8;
  double h_init = 1e-2;
  double h_min = 1e-8;
  double h_max = 0.1;
  Predictor predictor = Predictor::RK4;
  CorrectorOptions corrector;
  double trust_radius = 1.0;  // predicted |dy| above 10x this is a blowup
  std::optional<ChartPair> cert_charts;
  std::optional<Weight> cert_weight;
};

/// Davidenko field dy/dt = -S(x, y) D_xF(x, y) dx/dt.
Vector davidenko_velocity(const ImplicitProblem& p, const Vector& x, const Vector& y, const Vector& x_dot);

/// One predictor-corrector step along the straight segment x_t -> x_next.
/// Throws the corrector's errors and PredictorBlowup.
Vector step(const ImplicitProblem& p, const Vector& x_t, const Vector& y_t, const Vector& x_next,
            const TracerOptions& opts = {});

/// Lifts `path` to the zero set starting near y_start. Numerical failures end
/// the trace with a non-Completed status; malformed input throws.
Trace lift_path(const ImplicitProblem& p, const PathSpec& path, const Vector& y_start, const TracerOptions& opts = {});

// Serialization: 17 significant digits, empty cells for missing certificate values.
std::string trace_to_csv(const Trace& trace);
Trace trace_from_csv(const std::string& csv);
nlohmann::json trace_to_json(const Trace& trace);
Trace trace_from_json(const nlohmann::json& j);

}  // namespace glift
