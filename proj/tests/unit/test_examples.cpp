#include "helpers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "glift/atlas.hpp"
#include "glift/error.hpp"
#include "glift/examples.hpp"
#include "glift/linalg.hpp"

using namespace glift;
using namespace testing;
using std::numbers::pi;

namespace {

Vector random_in(std::mt19937_64& rng, const Box& box, double clamp = 5.0) {
  Vector x(box.dim());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x(i) = uniform(rng, std::max(-clamp, box.lower()(i)), std::min(clamp, box.upper()(i)));
  return x;
}

// Random in-domain point near Z: a perturbed oracle or seed point.
std::pair<Vector, Vector> random_point(std::mt19937_64& rng, const ExampleDescriptor& d) {
  const ImplicitProblem& p = *d.problem;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vector x = p.seed_x(), y = p.seed_y();
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += uniform(rng, -0.5, 0.5);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += uniform(rng, -0.5, 0.5) * (d.name == "annulus" ? 0.1 : 1.0);
    if (p.domain_x().contains(x) && p.domain_y().contains(y)) return {x, y};
  }
  FAIL("no in-domain sample");
  return {};
}

}  // namespace

TEST_CASE("registry") {
  const auto names = example_names();
  CHECK(names.size() >= 7);
  for (const char* n : {"diode", "line", "circle-x", "annulus", "constrained-circle", "cubic", "linear"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  for (const auto& n : names) CHECK(make_example(n).name == n);
  CHECK(kind_of([] { make_example("nope"); }) == ErrorKind::UnknownExample);
  CHECK(kind_of([] { make_example("diode", {{"bogus", 1.0}}); }) == ErrorKind::InvalidParams);
  CHECK(kind_of([] { make_example("diode", {{"a1", -1.0}}); }) == ErrorKind::InvalidParams);
  CHECK(kind_of([] { make_example("line", {{"y_min", -1.0}}); }) == ErrorKind::InvalidParams);
  CHECK(make_example("annulus", {{"delta", 0.25}}).expected_gap == doctest::Approx(0.125));
}

TEST_CASE("diode") {
  const auto d = diode_circuit();
  CHECK(residual(*d.problem, v1(0), v1(0))(0) == 0.0);
  CHECK(d.oracle(v1(2))(0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(jac_y(*d.problem, v1(2), v1(std::log(2.0)))(0, 0) == doctest::Approx(-4.0));
  // Asymmetric parameters: no closed form, residual validation only.
  const auto asym = diode_circuit(DiodeParams{1.0, 0.5, 1.0, 2.0});
  CHECK_FALSE(static_cast<bool>(asym.oracle));
  SolutionAtlas atlas(asym.problem);
  const Vector v = atlas.evaluate(v1(3));
  CHECK(std::abs(residual(*asym.problem, v1(3), v)(0)) <= 1e-8);
  CHECK(v(0) == doctest::Approx(atlas.evaluate(v1(3))(0)));
  CHECK_THROWS_AS(diode_circuit(DiodeParams{1, 1, 0, 1}), Error);
}

TEST_CASE("circle in x") {
  const auto c = circle_in_x();
  CHECK(c.has_tag(Behavior::MonodromyOpen));
  const Matrix jy = jac_y(*c.problem, v2(1, 0), v1(0));
  CHECK((jy - v2(0, -1)).norm() < 1e-15);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const double y = uniform(rng, -10, 10);
    CHECK(smallest_singular_value(jac_y(*c.problem, v2(std::cos(y), std::sin(y)), v1(y))) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(*c.expected_gap == doctest::Approx(2 * pi));
}

TEST_CASE("annulus tube") {
  const auto a = annulus();
  const ImplicitProblem& p = *a.problem;
  CHECK(a.has_tag(Behavior::MonodromyOpen));
  CHECK(a.has_tag(Behavior::GrowthBoundFails));
  const Matrix dft = -jac_y(p, p.seed_x(), v2(0.1, 0.5));
  CHECK(dft.determinant() == doctest::Approx(1.5 * 8 * pi).epsilon(1e-12));
  CHECK(1.5 * 8 * pi == doctest::Approx(37.699).epsilon(1e-4));
  // y1 = 0 sits on the closed edge of the y-box; use the raw formula there.
  const Matrix dft0 = -p.definition().jac_y(p.seed_x(), v2(0.0, 0.5));
  CHECK(dft0.inverse()(0, 0) == doctest::Approx(1.0 / (12 * pi)).epsilon(1e-12));
  CHECK(1.0 / (12 * pi) == doctest::Approx(0.026526).epsilon(1e-4));
  // F~1(y) = (alpha + y2)(sin k y1, cos k y1)
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Vector y = v2(uniform(rng, 0.01, 0.49), uniform(rng, 0.01, 0.99));
    const double k = 8 * pi;
    const Vector x = (1 + y(1)) * v2(std::sin(k * y(0)), std::cos(k * y(0)));
    CHECK(residual(p, x, y).norm() <= 1e-14);
  }
  CHECK(*a.expected_gap == doctest::Approx(0.25));
}

TEST_CASE("tube helper rejects stationary curves") {
  TubeCurve flat;
  flat.gamma = [](double t) { return Eigen::Vector2d(t * t, 0.0); };
  flat.d_gamma = [](double t) { return Eigen::Vector2d(2 * t, 0.0); };
  flat.dd_gamma = [](double) { return Eigen::Vector2d(2.0, 0.0); };
  CHECK(kind_of([&] { tube_problem(flat, -1, 1, v2(0.5, 0.5)); }) == ErrorKind::DegenerateTube);
  const ImplicitProblem ok = tube_problem(flat, 0.1, 1, v2(0.5, 0.5));
  CHECK(residual(ok, ok.seed_x(), ok.seed_y()).norm() == 0.0);
}

TEST_CASE("constrained circle is overdetermined but consistent") {
  const auto cc = constrained_circle();
  CHECK(cc.problem->l() == 3);
  CHECK(cc.problem->n() == 2);
  const Matrix jy = jac_y(*cc.problem, v2(1, 0), v2(1, 0));
  CHECK(smallest_singular_value(jy) == doctest::Approx(1.0));
}

TEST_CASE("cubic and linear oracles") {
  const auto c = cubic_problem();
  CHECK(c.oracle(v1(2))(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.oracle(v1(10))(0) == doctest::Approx(2.0).epsilon(1e-14));
  const auto l = linear_problem();
  CHECK((l.oracle(v2(1, 1)) - v2(-0.5, -0.5)).norm() < 1e-15);
  CHECK(kind_of([] { linear_problem(Matrix::Identity(2, 2), Matrix::Zero(2, 2)); }) == ErrorKind::InvalidParams);
}

TEST_CASE("property: oracles are zeros of F") {
  std::mt19937_64 rng(0);
  for (const auto& name : example_names()) {
    const auto d = make_example(name);
    if (!d.oracle || !d.oracle_region) continue;
    CAPTURE(name);
    for (int k = 0; k < 100; ++k) {
      Vector x = random_in(rng, *d.oracle_region, 1e3);
      if (name == "constrained-circle") x /= x.norm();
      if (!d.problem->domain_x().contains(x)) continue;
      CHECK(residual(*d.problem, x, d.oracle(x)).norm() <= 1e-10 * std::max(1.0, x.norm()));
    }
  }
}

TEST_CASE("property: evaluate agrees with the oracle on solvable examples") {
  std::mt19937_64 rng(0);
  for (const auto& name : example_names()) {
    const auto d = make_example(name);
    if (!d.has_tag(Behavior::Solvable) || !d.oracle || d.problem->l() != d.problem->n()) continue;
    CAPTURE(name);
    SolutionAtlas atlas(d.problem, {}, d.charts ? std::optional<Chart>(d.charts->phi) : std::nullopt);
    for (int k = 0; k < 50; ++k) {
      const Vector x = random_in(rng, *d.oracle_region, 10.0);
      CHECK((atlas.evaluate(x) - d.oracle(x)).norm() <= 1e-6);
      if (d.oracle_jacobian) {
        const Matrix dg = atlas.derivative(x);
        CHECK((dg - d.oracle_jacobian(x)).norm() <= 1e-6 * std::max(1.0, dg.norm()));
      }
    }
  }
}

TEST_CASE("property: monodromy-open examples have the expected gap") {
  for (const auto& name : example_names()) {
    const auto d = make_example(name);
    if (!d.has_tag(Behavior::MonodromyOpen)) continue;
    CAPTURE(name);
    REQUIRE(d.loop.has_value());
    SolutionAtlas atlas(d.problem);
    const MonodromyResult r = monodromy_check(atlas, *d.loop);
    CHECK_FALSE(r.closed);
    CHECK(std::abs(r.gap - *d.expected_gap) <= 1e-3);
  }
}

TEST_CASE("property: analytic Jacobians match finite differences") {
  std::mt19937_64 rng(9);
  for (const auto& name : example_names()) {
    const auto d = make_example(name);
    CAPTURE(name);
    for (int k = 0; k < 100; ++k) {
      const auto [x, y] = random_point(rng, d);
      for (bool wrt_x : {true, false}) {
        const Matrix a = wrt_x ? jac_x(*d.problem, x, y) : jac_y(*d.problem, x, y);
        const Matrix f = wrt_x ? numeric_jac_x(*d.problem, x, y) : numeric_jac_y(*d.problem, x, y);
        CHECK((a - f).norm() <= 1e-5 * std::max(1.0, a.norm()));
      }
    }
  }
}
