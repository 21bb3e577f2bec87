#include "helpers.hpp"

#include <cmath>

#include "glift/corrector.hpp"
#include "glift/error.hpp"
#include "glift/examples.hpp"
#include "glift/linalg.hpp"

using namespace glift;
using namespace testing;

TEST_CASE("linear problem converges in one iteration") {
  const auto line = line_problem();
  const Correction c = newton_correct(*line.problem, v1(0.3), v1(0.0));
  CHECK(c.iterations == 1);
  CHECK(c.y(0) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("diode at I = 2 converges to log 2") {
  const auto d = diode_circuit();
  const Correction c = newton_correct(*d.problem, v1(2.0), v1(0.5));
  CHECK(std::abs(c.y(0) - std::log(2.0)) <= 1e-9);
  CHECK(c.residual_norm <= 1e-10);
}

TEST_CASE("diode at I = -3 has no solution") {
  // f(V) > -2 for every V, so I = -3 is outside the range; widen the I box to allow the query.
  DiodeParams p;
  p.i_min = -5.0;
  const auto d = diode_circuit(p);
  try {
    newton_correct(*d.problem, v1(-3.0), v1(0.0));
    FAIL("expected a corrector failure");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::NoConvergence || e.kind() == ErrorKind::BoundaryEscape));
  }
}

TEST_CASE("rank loss at an iterate is reported") {
  const auto fold = fold_problem();
  // Start exactly on the fold: D_yF = -2y = 0.
  ImplicitProblem::Definition def = fold.problem->definition();
  try {
    newton_correct(ImplicitProblem(def), v1(1.0), v1(0.0));
    FAIL("expected RankLoss");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankLoss);
  }
}

TEST_CASE("starting outside the domain is rejected") {
  const auto d = diode_circuit();
  CHECK_THROWS_AS(newton_correct(*d.problem, v1(0.0), v1(10.0)), Error);
  CorrectorOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(newton_correct(*d.problem, v1(0.0), v1(0.0), bad), Error);
}

TEST_CASE("property: quadratic tail on the diode") {
  const auto d = diode_circuit();
  CorrectorOptions o;
  o.tol = 1e-14;
  const Correction c = newton_correct(*d.problem, v1(2.0), v1(1.5), o);
  const auto& h = c.residual_history;
  REQUIRE(h.size() >= 3);
  // final two updates: r_{k+1} <= r_k^{1.5}, with slack for roundoff at the floor
  for (std::size_t i = h.size() - 3; i + 1 < h.size(); ++i) {
    CAPTURE(i);
    CHECK(h[i] < 1.0);
    CHECK(h[i + 1] <= std::pow(h[i], 1.5) + 1e-15);
  }
}

TEST_CASE("property: returned point is a fixed point") {
  std::mt19937_64 rng(8);
  for (const auto& name : {"diode", "cubic", "linear", "line", "exponential"}) {
    const auto d = make_example(name);
    for (int k = 0; k < 20; ++k) {
      const Box& r = *d.oracle_region;
      Vector x(r.dim());
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = uniform(rng, r.lower()(i), r.upper()(i));
      const Vector y0 = d.oracle(x) + Vector::Constant(d.problem->n(), 0.01);
      const Correction c = newton_correct(*d.problem, x, y0);
      const Vector y1 = c.y - left_inverse(jac_y(*d.problem, x, c.y)) * residual(*d.problem, x, c.y);
      CHECK((y1 - c.y).norm() <= 10 * 1e-10);
    }
  }
}

TEST_CASE("property: overdetermined consistent system reaches a true zero") {
  const auto d = constrained_circle();
  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; ++k) {
    const double th = uniform(rng, 0, 6.28);
    const Vector x = v2(std::cos(th), std::sin(th));
    const Correction c = newton_correct(*d.problem, x, x + v2(0.05, -0.03));
    const Vector r = residual(*d.problem, x, c.y);
    CHECK(r.cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((c.y - x).norm() <= 1e-9);
  }
}
