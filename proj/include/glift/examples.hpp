#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glift/charts.hpp"
#include "glift/tracer.hpp"
#include "glift/weights.hpp"

namespace glift {

enum class Behavior { Solvable, MonodromyOpen, RankLossAtPoint, GrowthBoundFails };
std::string_view to_string(Behavior b);

struct ExampleDescriptor {
  std::string name;
  std::string summary;
  std::map<std::string, double> params;
  std::shared_ptr<const ImplicitProblem> problem;
  std::vector<Behavior> tags;

  std::optional<ChartPair> charts;  // recommended for the growth bound
  std::optional<Weight> weight;

  // Closed-form g and Dg where one exists (possibly only on the seed's sheet).
  std::function<Vector(const Vector&)> oracle;
  std::function<Matrix(const Vector&)> oracle_jacobian;
  std::optional<Box> oracle_region;  // x-box where `oracle` is valid and reachable

  PathSpec demo_path;                // a short path from the seed
  std::optional<PathSpec> loop;      // designated monodromy loop through the seed
  std::optional<double> expected_gap;

  bool has_tag(Behavior b) const;
};

struct DiodeParams {
  double a1 = 1.0, a2 = 1.0, b1 = 1.0, b2 = 1.0;
  double v_min = -3.0, v_max = 3.0;
  // Defaults to (f(v_min), f(v_max)) when left NaN.
  double i_min = std::numeric_limits<double>::quiet_NaN();
  double i_max = std::numeric_limits<double>::quiet_NaN();
};

/// I - f(V) with f(V) = a1 (e^{V/b1} - 1) + a2 (e^{V/b2} - 1); x = I, y = V.
ExampleDescriptor diode_circuit(const DiodeParams& params = {});

/// x - y on R x (lo, hi); the whole line when no interval is given.
ExampleDescriptor line_problem(std::optional<std::pair<double, double>> y_interval = std::nullopt);

/// (x1 - cos y, x2 - sin y): Z projects onto the unit circle.
ExampleDescriptor circle_in_x();

/// Planar curve t -> gamma(t) with first and second derivatives.
struct TubeCurve {
  std::function<Eigen::Vector2d(double)> gamma;
  std::function<Eigen::Vector2d(double)> d_gamma;
  std::function<Eigen::Vector2d(double)> dd_gamma;
};

/// F(x, y) = x - (gamma(y1) + (y2 - 1/2) N(y1)) on (y1_lo, y1_hi) x (0, 1),
/// N the unit normal R gamma' / |gamma'| with R the quarter turn.
/// Throws DegenerateTube when gamma' vanishes on the interval.
ImplicitProblem tube_problem(const TubeCurve& curve, double y1_lo, double y1_hi, const Vector& seed_y,
                             std::string name = "tube");

/// Tube around the circle of radius alpha + 1/2 wound (1 + eps) times over (0, delta).
ExampleDescriptor annulus(double delta = 0.5, double alpha = 1.0, double eps = 1.0, double seed_y1 = 0.1,
                          double seed_y2 = 0.5);

/// (x1 - y1, x2 - y2, x1^2 + x2^2 - 1): overdetermined, g(x) = x on the unit circle.
ExampleDescriptor constrained_circle();

/// y^3 + y - x.
ExampleDescriptor cubic_problem();

/// A x + B y with B invertible.
ExampleDescriptor linear_problem(const Matrix& a = Matrix::Identity(2, 2), const Matrix& b = 2.0 * Matrix::Identity(2, 2));

/// x - y^2 seeded at (1, 1): D_yF vanishes on the fold y = 0.
ExampleDescriptor fold_problem();

/// x - e^y on (0, inf) x R.
ExampleDescriptor exponential_problem();

/// Registry used by the CLI. Unknown names throw UnknownExample, unknown or
/// invalid parameters InvalidParams.
std::vector<std::string> example_names();
ExampleDescriptor make_example(const std::string& name, const std::map<std::string, double>& params = {});

}  // namespace glift
