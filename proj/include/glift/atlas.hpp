#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "glift/charts.hpp"
#include "glift/tracer.hpp"

namespace glift {

/// Lazily materialized graph {(x, g(x))} of the global implicit function on
/// the component of Z that contains the seed. Not thread-safe: evaluate()
/// mutates the cache.
class SolutionAtlas {
 public:
  struct Entry {
    Vector x;
    Vector y;
  };

  /// Validates the seed. Paths are planned as straight segments in the
  /// coordinates of `planning_chart` (identity when absent).
  explicit SolutionAtlas(std::shared_ptr<const ImplicitProblem> problem, TracerOptions opts = {},
                         std::optional<Chart> planning_chart = std::nullopt);

  const ImplicitProblem& problem() const { return *problem_; }
  std::shared_ptr<const ImplicitProblem> problem_ptr() const { return problem_; }
  const TracerOptions& options() const { return opts_; }
  const std::vector<Entry>& cache() const { return cache_; }
  double snap_radius() const { return snap_radius_; }

  /// g(x). Exact cache hits return the stored y unchanged; points within the
  /// snap radius of a cached x are re-corrected; everything else is lifted
  /// from the nearest cached point. Throws Unreachable when the lift fails.
  Vector evaluate(const Vector& x);

  /// Dg(x) = -S D_xF at (x, g(x)).
  Matrix derivative(const Vector& x);

  /// Lifts `path` starting from g(path(0)) without caching (paths may wind
  /// around and revisit x on another sheet).
  Trace lift(const PathSpec& path);

  /// Planned path from the nearest cached point to x (chart line or segment).
  PathSpec plan(const Vector& x) const;

  nlohmann::json to_json() const;

  using Resolver = std::function<std::shared_ptr<const ImplicitProblem>(const std::string& name,
                                                                        const std::map<std::string, double>& params)>;
  /// Rebuilds an atlas from to_json() output; cached samples are re-validated.
  static SolutionAtlas from_json(const nlohmann::json& j, const Resolver& resolve, TracerOptions opts = {});

 private:
  std::size_t nearest(const Vector& x) const;
  void insert(const Vector& x, const Vector& y);

  std::shared_ptr<const ImplicitProblem> problem_;
  TracerOptions opts_;
  std::optional<Chart> chart_;
  std::shared_ptr<const Chart> chart_ptr_;
  double snap_radius_ = 1e-6;
  std::vector<Entry> cache_;
};

struct PathIndependenceReport {
  std::vector<Vector> endpoints;
  double max_gap = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// Lifts every path (each must end at x_target) and compares endpoints;
/// passes iff the largest pairwise gap is at most 100 * trace_tol.
PathIndependenceReport path_independence_check(SolutionAtlas& atlas, const Vector& x_target,
                                               const std::vector<PathSpec>& paths);

struct MonodromyResult {
  bool closed = false;
  double gap = 0.0;  // |y_end - y_start|
  Vector delta;      // y_end - y_start
  double threshold = 0.0;
  Trace trace;
};

/// Lifts a closed loop; Closed iff the lift returns within 100 * trace_tol.
MonodromyResult monodromy_check(SolutionAtlas& atlas, const PathSpec& loop);

}  // namespace glift
