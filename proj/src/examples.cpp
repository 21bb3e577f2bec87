#include "glift/examples.hpp"

#include <cmath>
#include <numbers>

#include "glift/error.hpp"

namespace glift {

using std::numbers::pi;

std::string_view to_string(Behavior b) {
  switch (b) {
    case Behavior::Solvable: return "Solvable";
    case Behavior::MonodromyOpen: return "MonodromyOpen";
    case Behavior::RankLossAtPoint: return "RankLossAtPoint";
    case Behavior::GrowthBoundFails: return "GrowthBoundFails";
  }
  return "Solvable";
}

bool ExampleDescriptor::has_tag(Behavior b) const { return std::find(tags.begin(), tags.end(), b) != tags.end(); }

namespace {

Vector vec1(double a) { return Vector::Constant(1, a); }
Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }
Matrix mat1(double a) { return Matrix::Constant(1, 1, a); }
Box box1(double lo, double hi) { return Box(vec1(lo), vec1(hi)); }

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidParams, what);
}

}  // namespace

// ---------------------------------------------------------------------------

ExampleDescriptor diode_circuit(const DiodeParams& dp) {
  require(dp.a1 > 0 && dp.a2 > 0 && dp.b1 > 0 && dp.b2 > 0, "diode parameters must be positive");
  require(dp.v_min < dp.v_max, "diode V bounds must satisfy v_min < v_max");
  const double a1 = dp.a1, a2 = dp.a2, b1 = dp.b1, b2 = dp.b2;
  auto f = [=](double v) { return a1 * std::expm1(v / b1) + a2 * std::expm1(v / b2); };
  auto df = [=](double v) { return a1 / b1 * std::exp(v / b1) + a2 / b2 * std::exp(v / b2); };
  const double i_min = std::isnan(dp.i_min) ? f(dp.v_min) : dp.i_min;
  const double i_max = std::isnan(dp.i_max) ? f(dp.v_max) : dp.i_max;
  require(i_min < i_max, "diode I bounds must satisfy i_min < i_max");

  // Seed at the origin when it is admissible, otherwise at the middle of the V interval.
  const Box vbox = box1(dp.v_min, dp.v_max);
  const Box ibox = box1(i_min, i_max);
  double v0 = 0.0;
  if (!vbox.contains(vec1(v0)) || !ibox.contains(vec1(f(v0)))) v0 = 0.5 * (dp.v_min + dp.v_max);
  require(ibox.contains(vec1(f(v0))), "diode bounds admit no interior seed");

  ImplicitProblem::Definition def;
  def.name = "diode";
  def.params = {{"a1", a1}, {"a2", a2}, {"b1", b1}, {"b2", b2}, {"v_min", dp.v_min},
                {"v_max", dp.v_max}, {"i_min", i_min}, {"i_max", i_max}};
  def.m = def.n = def.l = 1;
  def.residual = [f](const Vector& x, const Vector& y) { return vec1(x(0) - f(y(0))); };
  def.jac_x = [](const Vector&, const Vector&) { return mat1(1.0); };
  def.jac_y = [df](const Vector&, const Vector& y) { return mat1(-df(y(0))); };
  def.domain_x = Domain(ibox);
  def.domain_y = Domain(vbox);
  def.seed_x = vec1(f(v0));
  def.seed_y = vec1(v0);

  ExampleDescriptor d;
  d.name = "diode";
  d.summary = "diode circuit I - f(V), f a sum of two exponentials";
  d.params = def.params;
  d.problem = std::make_shared<const ImplicitProblem>(std::move(def));
  d.tags = {Behavior::Solvable};
  const Chart phi = tangent_box_chart(ibox);
  d.charts = ChartPair{phi, psi_from_scalar_solution(phi, ScalarMap{f, df, {}}, vbox)};
  d.weight = affine_weight(1.0, 1.0);
  if (a1 == a2 && b1 == b2) {
    // f(V) = 2a (e^{V/b} - 1)  =>  g(I) = b log(1 + I / (2a)).
    d.oracle = [a1, b1](const Vector& x) { return vec1(b1 * std::log1p(x(0) / (2.0 * a1))); };
    d.oracle_jacobian = [a1, b1](const Vector& x) { return mat1(b1 / (2.0 * a1 + x(0))); };
    d.oracle_region = box1(std::max(i_min, -2.0 * a1 * 0.95), i_max);
  }
  d.demo_path = PathSpec::segment(d.problem->seed_x(), d.problem->seed_x() + vec1(2.0));
  return d;
}

ExampleDescriptor line_problem(std::optional<std::pair<double, double>> y_interval) {
  ImplicitProblem::Definition def;
  def.name = "line";
  def.m = def.n = def.l = 1;
  def.residual = [](const Vector& x, const Vector& y) { return vec1(x(0) - y(0)); };
  def.jac_x = [](const Vector&, const Vector&) { return mat1(1.0); };
  def.jac_y = [](const Vector&, const Vector&) { return mat1(-1.0); };
  double seed = 0.0;
  if (y_interval) {
    const auto [lo, hi] = *y_interval;
    require(lo < hi, "line interval must satisfy lo < hi");
    def.params = {{"y_min", lo}, {"y_max", hi}};
    def.domain_y = Domain(box1(lo, hi));
    if (!(lo < 0.0 && 0.0 < hi)) seed = 0.5 * (lo + hi);
  }
  def.seed_x = vec1(seed);
  def.seed_y = vec1(seed);

  ExampleDescriptor d;
  d.name = "line";
  d.summary = "x - y, optionally with y restricted to an open interval";
  d.params = def.params;
  d.problem = std::make_shared<const ImplicitProblem>(std::move(def));
  d.tags = {Behavior::Solvable};
  d.weight = affine_weight(1.0, 1.0);
  d.oracle = [](const Vector& x) { return x; };
  d.oracle_jacobian = [](const Vector&) { return mat1(1.0); };
  if (y_interval) {
    // Same chart on both sides: pi_1(Z) = pi_2(Z) is the interval.
    const Chart c = tangent_box_chart(box1(y_interval->first, y_interval->second));
    d.charts = ChartPair{c, c};
    const double mid = 0.5 * (y_interval->first + y_interval->second);
    const double half = 0.45 * (y_interval->second - y_interval->first);
    d.oracle_region = box1(mid - half, mid + half);
  } else {
    d.charts = ChartPair{identity_chart(1), identity_chart(1)};
    d.oracle_region = box1(-5.0, 5.0);
  }
  d.demo_path = PathSpec::segment(vec1(seed), vec1(seed + 0.8));
  return d;
}

ExampleDescriptor circle_in_x() {
  ImplicitProblem::Definition def;
  def.name = "circle-x";
  def.m = 2;
  def.n = 1;
  def.l = 2;
  def.residual = [](const Vector& x, const Vector& y) { return vec2(x(0) - std::cos(y(0)), x(1) - std::sin(y(0))); };
  def.jac_x = [](const Vector&, const Vector&) { return Matrix(Matrix::Identity(2, 2)); };
  def.jac_y = [](const Vector&, const Vector& y) {
    Matrix j(2, 1);
    j << std::sin(y(0)), -std::cos(y(0));
    return j;
  };
  def.seed_x = vec2(1.0, 0.0);
  def.seed_y = vec1(0.0);

  ExampleDescriptor d;
  d.name = "circle-x";
  d.summary = "(x1 - cos y, x2 - sin y); x-projection is the unit circle";
  d.problem = std::make_shared<const ImplicitProblem>(std::move(def));
  d.tags = {Behavior::MonodromyOpen};
  // Angle on the seed's sheet, valid away from the negative x1 axis.
  d.oracle = [](const Vector& x) { return vec1(std::atan2(x(1), x(0))); };
  d.oracle_jacobian = [](const Vector& x) {
    Matrix j(1, 2);
    const double r2 = x.squaredNorm();
    j << -x(1) / r2, x(0) / r2;
    return j;
  };
  d.demo_path = PathSpec::circle(vec2(0.0, 0.0), 1.0, 0.25);
  d.loop = PathSpec::circle(vec2(0.0, 0.0), 1.0, 1.0);
  d.expected_gap = 2.0 * pi;
  return d;
}

// ---------------------------------------------------------------------------

ImplicitProblem tube_problem(const TubeCurve& curve, double y1_lo, double y1_hi, const Vector& seed_y,
                             std::string name) {
  if (!curve.gamma || !curve.d_gamma || !curve.dd_gamma) {
    throw Error(ErrorKind::InvalidArgument, "tube curve needs gamma and two derivatives");
  }
  if (!(y1_lo < y1_hi)) throw Error(ErrorKind::InvalidParams, "tube interval must satisfy lo < hi");
  constexpr int kProbes = 1000;
  for (int i = 0; i <= kProbes; ++i) {
    const double t = y1_lo + (y1_hi - y1_lo) * i / kProbes;
    const double speed = curve.d_gamma(t).norm();
    if (!(speed > 1e-12)) throw Error(ErrorKind::DegenerateTube, "gamma' vanishes on the interval", t);
  }

  const Eigen::Matrix2d rot = (Eigen::Matrix2d() << 0.0, -1.0, 1.0, 0.0).finished();
  auto surface = [curve, rot](const Vector& y) -> Eigen::Vector2d {
    const Eigen::Vector2d dg = curve.d_gamma(y(0));
    return curve.gamma(y(0)) + (y(1) - 0.5) * rot * dg / dg.norm();
  };

  ImplicitProblem::Definition def;
  def.name = std::move(name);
  def.m = def.n = def.l = 2;
  def.residual = [surface](const Vector& x, const Vector& y) -> Vector { return x - surface(y); };
  def.jac_x = [](const Vector&, const Vector&) { return Matrix(Matrix::Identity(2, 2)); };
  def.jac_y = [curve, rot](const Vector&, const Vector& y) {
    const Eigen::Vector2d dg = curve.d_gamma(y(0));
    const Eigen::Vector2d ddg = curve.dd_gamma(y(0));
    const double s = dg.norm();
    const Eigen::Vector2d normal = rot * dg / s;
    const Eigen::Vector2d d_normal = rot * (ddg / s - dg * dg.dot(ddg) / (s * s * s));
    Matrix j(2, 2);
    j.col(0) = -(dg + (y(1) - 0.5) * d_normal);
    j.col(1) = -normal;
    return j;
  };
  def.domain_y = Domain(Box(vec2(y1_lo, 0.0), vec2(y1_hi, 1.0)));
  def.seed_y = seed_y;
  def.seed_x = surface(seed_y);
  return ImplicitProblem(std::move(def));
}

ExampleDescriptor annulus(double delta, double alpha, double eps, double seed_y1, double seed_y2) {
  require(0.0 < delta && delta <= 0.5, "annulus needs 0 < delta <= 1/2");
  require(alpha > 0.0 && eps > 0.0, "annulus needs alpha, eps > 0");
  require(0.0 < seed_y1 && seed_y1 < delta && 0.0 < seed_y2 && seed_y2 < 1.0, "annulus seed outside (0, delta) x (0, 1)");
  const double k = 2.0 * pi / delta * (1.0 + eps);
  const double c = alpha + 0.5;
  TubeCurve curve;
  curve.gamma = [c, k](double t) { return Eigen::Vector2d(c * std::sin(k * t), c * std::cos(k * t)); };
  curve.d_gamma = [c, k](double t) { return Eigen::Vector2d(c * k * std::cos(k * t), -c * k * std::sin(k * t)); };
  curve.dd_gamma = [c, k](double t) {
    return Eigen::Vector2d(-c * k * k * std::sin(k * t), -c * k * k * std::cos(k * t));
  };
  ImplicitProblem::Definition def = tube_problem(curve, 0.0, delta, vec2(seed_y1, seed_y2), "annulus").definition();
  def.params = {{"delta", delta}, {"alpha", alpha}, {"eps", eps}, {"seed_y1", seed_y1}, {"seed_y2", seed_y2}};

  ExampleDescriptor d;
  d.name = "annulus";
  d.summary = "tube over a circle wound 1 + eps times; x-loops do not lift to loops";
  d.params = def.params;
  d.problem = std::make_shared<const ImplicitProblem>(std::move(def));
  d.tags = {Behavior::MonodromyOpen, Behavior::GrowthBoundFails};
  // Inverse on the seed's sheet: y2 = |x| - alpha, y1 = angle / k with the
  // angle measured clockwise from the x2 axis and unwrapped near the seed.
  d.oracle = [alpha, k, seed_y1](const Vector& x) {
    double theta = std::atan2(x(0), x(1));
    theta += 2.0 * pi * std::round((k * seed_y1 - theta) / (2.0 * pi));
    return vec2(theta / k, x.norm() - alpha);
  };
  const double radius = alpha + seed_y2;
  // x = r (sin(k y1), cos(k y1)) runs clockwise as y1 grows.
  const double start = pi / 2.0 - k * seed_y1;
  d.demo_path = PathSpec::circle(vec2(0.0, 0.0), radius, -0.25, start);
  d.loop = PathSpec::circle(vec2(0.0, 0.0), radius, -1.0, start);
  d.expected_gap = delta / (1.0 + eps);
  return d;
}

ExampleDescriptor constrained_circle() {
  ImplicitProblem::Definition def;
  def.name = "constrained-circle";
  def.m = 2;
  def.n = 2;
  def.l = 3;
  def.residual = [](const Vector& x, const Vector& y) {
    return Vector((Vector(3) << x(0) - y(0), x(1) - y(1), x.squaredNorm() - 1.0).finished());
  };
  def.jac_x = [](const Vector& x, const Vector&) {
    Matrix j(3, 2);
    j << 1.0, 0.0, 0.0, 1.0, 2.0 * x(0), 2.0 * x(1);
    return j;
  };
  def.jac_y = [](const Vector&, const Vector&) {
    Matrix j = Matrix::Zero(3, 2);
    j(0, 0) = j(1, 1) = -1.0;
    return j;
  };
  def.seed_x = vec2(1.0, 0.0);
  def.seed_y = vec2(1.0, 0.0);

  ExampleDescriptor d;
  d.name = "constrained-circle";
  d.summary = "(x1 - y1, x2 - y2, |x|^2 - 1); l = 3 > n = 2, g(x) = x on the unit circle";
  d.problem = std::make_shared<const ImplicitProblem>(std::move(def));
  d.tags = {Behavior::Solvable};
  d.oracle = [](const Vector& x) { return x; };
  d.oracle_jacobian = [](const Vector&) { return Matrix(Matrix::Identity(2, 2)); };
  d.demo_path = PathSpec::circle(vec2(0.0, 0.0), 1.0, 0.25);
  d.loop = PathSpec::circle(vec2(0.0, 0.0), 1.0, 1.0);
  d.expected_gap = 0.0;
  return d;
}

ExampleDescriptor cubic_problem() {
  ImplicitProblem::Definition def;
  def.name = "cubic";
  def.m = def.n = def.l = 1;
  def.residual = [](const Vector& x, const Vector& y) { return vec1(y(0) * y(0) * y(0) + y(0) - x(0)); };
  def.jac_x = [](const Vector&, const Vector&) { return mat1(-1.0); };
  def.jac_y = [](const Vector&, const Vector& y) { return mat1(3.0 * y(0) * y(0) + 1.0); };
  def.seed_x = vec1(0.0);
  def.seed_y = vec1(0.0);

  ExampleDescriptor d;
  d.name = "cubic";
  d.summary = "y^3 + y - x; D_yF >= 1 everywhere";
  d.problem = std::make_shared<const ImplicitProblem>(std::move(def));
  d.tags = {Behavior::Solvable};
  d.charts = ChartPair{identity_chart(1), identity_chart(1)};
  d.weight = affine_weight(1.0, 1.0);
  // Cardano: the single real root of y^3 + y - x.
  d.oracle = [](const Vector& x) {
    const double q = 0.5 * x(0);
    const double r = std::sqrt(q * q + 1.0 / 27.0);
    return vec1(std::cbrt(q + r) + std::cbrt(q - r));
  };
  d.oracle_jacobian = [oracle = d.oracle](const Vector& x) {
    const double y = oracle(x)(0);
    return mat1(1.0 / (3.0 * y * y + 1.0));
  };
  d.oracle_region = box1(-5.0, 5.0);
  d.demo_path = PathSpec::segment(vec1(0.0), vec1(2.0));
  return d;
}

ExampleDescriptor linear_problem(const Matrix& a, const Matrix& b) {
  if (b.rows() != b.cols() || a.rows() != b.rows()) throw Error(ErrorKind::InvalidParams, "linear problem shapes");
  const Eigen::Index m = a.cols();
  const Eigen::Index n = b.cols();
  const Eigen::ColPivHouseholderQR<Matrix> qr(b);
  if (!qr.isInvertible()) throw Error(ErrorKind::InvalidParams, "linear problem needs invertible B");

  ImplicitProblem::Definition def;
  def.name = "linear";
  def.m = m;
  def.n = def.l = n;
  def.residual = [a, b](const Vector& x, const Vector& y) -> Vector { return a * x + b * y; };
  def.jac_x = [a](const Vector&, const Vector&) { return a; };
  def.jac_y = [b](const Vector&, const Vector&) { return b; };
  def.seed_x = Vector::Zero(m);
  def.seed_y = Vector::Zero(n);

  ExampleDescriptor d;
  d.name = "linear";
  d.summary = "A x + B y; g(x) = -B^{-1} A x";
  d.problem = std::make_shared<const ImplicitProblem>(std::move(def));
  d.tags = {Behavior::Solvable};
  d.charts = ChartPair{identity_chart(m), identity_chart(n)};
  d.weight = affine_weight(1.0, 1.0);
  const Matrix dg = -qr.solve(a);
  d.oracle = [dg](const Vector& x) -> Vector { return dg * x; };
  d.oracle_jacobian = [dg](const Vector&) { return dg; };
  d.oracle_region = Box(Vector::Constant(m, -2.0), Vector::Constant(m, 2.0));
  d.demo_path = PathSpec::segment(Vector::Zero(m), Vector::Ones(m));
  return d;
}

ExampleDescriptor fold_problem() {
  ImplicitProblem::Definition def;
  def.name = "fold";
  def.m = def.n = def.l = 1;
  def.residual = [](const Vector& x, const Vector& y) { return vec1(x(0) - y(0) * y(0)); };
  def.jac_x = [](const Vector&, const Vector&) { return mat1(1.0); };
  def.jac_y = [](const Vector&, const Vector& y) { return mat1(-2.0 * y(0)); };
  def.seed_x = vec1(1.0);
  def.seed_y = vec1(1.0);

  ExampleDescriptor d;
  d.name = "fold";
  d.summary = "x - y^2; the two branches meet at the fold x = 0";
  d.problem = std::make_shared<const ImplicitProblem>(std::move(def));
  d.tags = {Behavior::RankLossAtPoint};
  d.oracle = [](const Vector& x) { return vec1(std::sqrt(x(0))); };
  d.oracle_jacobian = [](const Vector& x) { return mat1(0.5 / std::sqrt(x(0))); };
  d.oracle_region = box1(0.01, 4.0);
  d.demo_path = PathSpec::segment(vec1(1.0), vec1(-1.0));
  return d;
}

ExampleDescriptor exponential_problem() {
  ImplicitProblem::Definition def;
  def.name = "exponential";
  def.m = def.n = def.l = 1;
  def.residual = [](const Vector& x, const Vector& y) { return vec1(x(0) - std::exp(y(0))); };
  def.jac_x = [](const Vector&, const Vector&) { return mat1(1.0); };
  def.jac_y = [](const Vector&, const Vector& y) { return mat1(-std::exp(y(0))); };
  def.domain_x = Domain(box1(0.0, kInf));
  def.seed_x = vec1(1.0);
  def.seed_y = vec1(0.0);

  ExampleDescriptor d;
  d.name = "exponential";
  d.summary = "x - e^y on (0, inf) x R; g = log";
  d.problem = std::make_shared<const ImplicitProblem>(std::move(def));
  d.tags = {Behavior::Solvable};
  // phi = log turns the growth product into exactly 1.
  d.charts = ChartPair{tangent_box_chart(box1(0.0, kInf)), identity_chart(1)};
  d.weight = affine_weight(1.0, 1.0);
  d.oracle = [](const Vector& x) { return vec1(std::log(x(0))); };
  d.oracle_jacobian = [](const Vector& x) { return mat1(1.0 / x(0)); };
  d.oracle_region = box1(0.05, 20.0);
  d.demo_path = PathSpec::segment(vec1(1.0), vec1(std::exp(5.0)));
  return d;
}

// ---------------------------------------------------------------------------

std::vector<std::string> example_names() {
  return {"diode", "line", "circle-x", "annulus", "constrained-circle", "cubic", "linear", "fold", "exponential"};
}

namespace {

class ParamReader {
 public:
  explicit ParamReader(const std::map<std::string, double>& p) : p_(p) {}
  double get(const std::string& key, double fallback) {
    used_.push_back(key);
    const auto it = p_.find(key);
    return it == p_.end() ? fallback : it->second;
  }
  bool has(const std::string& key) const { return p_.count(key) > 0; }
  void finish(const std::string& example) const {
    for (const auto& [key, value] : p_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw Error(ErrorKind::InvalidParams, "unknown parameter '" + key + "' for " + example);
      }
      if (!std::isfinite(value)) throw Error(ErrorKind::InvalidParams, "parameter '" + key + "' is not finite");
    }
  }

 private:
  const std::map<std::string, double>& p_;
  std::vector<std::string> used_;
};

}  // namespace

ExampleDescriptor make_example(const std::string& name, const std::map<std::string, double>& params) {
  ParamReader r(params);
  ExampleDescriptor d;
  if (name == "diode") {
    DiodeParams dp;
    dp.a1 = r.get("a1", dp.a1);
    dp.a2 = r.get("a2", dp.a2);
    dp.b1 = r.get("b1", dp.b1);
    dp.b2 = r.get("b2", dp.b2);
    dp.v_min = r.get("v_min", dp.v_min);
    dp.v_max = r.get("v_max", dp.v_max);
    dp.i_min = r.get("i_min", dp.i_min);
    dp.i_max = r.get("i_max", dp.i_max);
    r.finish(name);
    d = diode_circuit(dp);
  } else if (name == "line") {
    std::optional<std::pair<double, double>> interval;
    if (r.has("y_min") != r.has("y_max")) throw Error(ErrorKind::InvalidParams, "line needs both y_min and y_max");
    if (r.has("y_min")) interval = std::pair{r.get("y_min", 0.0), r.get("y_max", 0.0)};
    r.finish(name);
    d = line_problem(interval);
  } else if (name == "circle-x") {
    r.finish(name);
    d = circle_in_x();
  } else if (name == "annulus") {
    const double delta = r.get("delta", 0.5);
    const double alpha = r.get("alpha", 1.0);
    const double eps = r.get("eps", 1.0);
    const double y1 = r.get("seed_y1", 0.1);
    const double y2 = r.get("seed_y2", 0.5);
    r.finish(name);
    d = annulus(delta, alpha, eps, y1, y2);
  } else if (name == "constrained-circle") {
    r.finish(name);
    d = constrained_circle();
  } else if (name == "cubic") {
    r.finish(name);
    d = cubic_problem();
  } else if (name == "linear") {
    const double a = r.get("a", 1.0);
    const double b = r.get("b", 2.0);
    r.finish(name);
    d = linear_problem(a * Matrix::Identity(2, 2), b * Matrix::Identity(2, 2));
    ImplicitProblem::Definition def = d.problem->definition();
    def.params = {{"a", a}, {"b", b}};
    d.params = def.params;
    d.problem = std::make_shared<const ImplicitProblem>(std::move(def));
  } else if (name == "fold") {
    r.finish(name);
    d = fold_problem();
  } else if (name == "exponential") {
    r.finish(name);
    d = exponential_problem();
  } else {
    throw Error(ErrorKind::UnknownExample, "no example named '" + name + "'");
  }
  return d;
}

}  // namespace glift
