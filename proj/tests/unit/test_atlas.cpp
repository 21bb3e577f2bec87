#include "helpers.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

#include "glift/atlas.hpp"
#include "glift/error.hpp"
#include "glift/examples.hpp"

using namespace glift;
using namespace testing;
using std::numbers::pi;

TEST_CASE("evaluate: closed-form targets") {
  SolutionAtlas diode(diode_circuit().problem);
  CHECK(std::abs(diode.evaluate(v1(2))(0) - std::log(2.0)) <= 1e-6);
  CHECK(diode.evaluate(v1(0))(0) == 0.0);

  SolutionAtlas lin(linear_problem().problem);
  CHECK((lin.evaluate(v2(1, 1)) - v2(-0.5, -0.5)).norm() <= 1e-8);

  SolutionAtlas cubic(cubic_problem().problem);
  CHECK(std::abs(cubic.evaluate(v1(2))(0) - 1.0) <= 1e-8);

  SolutionAtlas line(line_problem().problem);
  CHECK(std::abs(line.evaluate(v1(0.3))(0) - 0.3) <= 1e-8);
}

TEST_CASE("evaluate: constrained circle along a planned arc") {
  const auto cc = constrained_circle();
  SolutionAtlas atlas(cc.problem);
  // Off-circle targets are outside pi_1(Z); the arc itself is lifted explicitly.
  const Trace t = atlas.lift(PathSpec::circle(v2(0, 0), 1.0, 0.25));
  REQUIRE(t.completed());
  CHECK((t.back().y - v2(0, 1)).norm() <= 1e-8);
  CHECK_THROWS_AS(atlas.evaluate(v2(0, 1)), Error);  // straight chord leaves the circle
}

TEST_CASE("evaluate: unreachable targets") {
  SolutionAtlas fold(fold_problem().problem);
  try {
    fold.evaluate(v1(-1));
    FAIL("expected Unreachable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unreachable);
  }
  SolutionAtlas diode(diode_circuit().problem);
  CHECK_THROWS_AS(diode.evaluate(v1(100)), Error);
}

TEST_CASE("derivative") {
  SolutionAtlas line(line_problem().problem);
  CHECK(line.derivative(v1(4.2))(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  SolutionAtlas diode(diode_circuit().problem);
  CHECK(std::abs(diode.derivative(v1(2))(0, 0) - 0.25) <= 1e-8);
  SolutionAtlas lin(linear_problem().problem);
  CHECK((lin.derivative(v2(0.3, -2)) + 0.5 * Matrix::Identity(2, 2)).norm() <= 1e-15);
}

TEST_CASE("property: evaluate is idempotent to the bit and caches graph points") {
  for (const auto& name : {"diode", "cubic", "linear", "exponential"}) {
    CAPTURE(name);
    const auto d = make_example(name);
    SolutionAtlas atlas(d.problem);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 10; ++k) {
      Vector x = d.problem->seed_x();
      for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i) = uniform(rng, d.oracle_region->lower()(i), d.oracle_region->upper()(i));
      const Vector a = atlas.evaluate(x);
      const Vector b = atlas.evaluate(x);
      CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
    }
    for (const auto& e : atlas.cache()) CHECK(residual(*d.problem, e.x, e.y).norm() <= 1e-8);
    for (std::size_t i = 0; i < atlas.cache().size(); ++i)
      for (std::size_t j = i + 1; j < atlas.cache().size(); ++j)
        CHECK((atlas.cache()[i].x - atlas.cache()[j].x).norm() > 0.0);
  }
}

TEST_CASE("property: near hits snap to the same sheet") {
  SolutionAtlas atlas(diode_circuit().problem);
  const Vector a = atlas.evaluate(v1(2));
  const Vector b = atlas.evaluate(v1(2 + 0.1 * atlas.snap_radius()));
  CHECK(std::abs(a(0) - b(0)) <= 1e-7);
}

TEST_CASE("property: derivative matches central differences of evaluate") {
  for (const auto& name : {"diode", "cubic", "linear"}) {
    CAPTURE(name);
    const auto d = make_example(name);
    SolutionAtlas atlas(d.problem);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 5; ++k) {
      Vector x = d.problem->seed_x();
      for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i) = uniform(rng, std::max(-1.5, d.oracle_region->lower()(i)), std::min(5.0, d.oracle_region->upper()(i)));
      const Matrix dg = atlas.derivative(x);
      const double h = 1e-5;
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        Vector xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        const Vector fd = (atlas.evaluate(xp) - atlas.evaluate(xm)) / (2 * h);
        CHECK((fd - dg.col(j)).norm() <= 1e-4 * std::max(dg.col(j).norm(), 1e-3));
      }
    }
  }
}

TEST_CASE("path independence") {
  SolutionAtlas diode(diode_circuit().problem);
  const auto r = path_independence_check(diode, v1(2), {PathSpec::segment(v1(0), v1(2)),
                                                       PathSpec::polyline({v1(0), v1(3), v1(2)})});
  CHECK(r.passed);
  CHECK(r.max_gap <= 1e-6);

  SolutionAtlas lin(linear_problem().problem);
  const auto l = path_independence_check(lin, v2(1, 1), {PathSpec::segment(v2(0, 0), v2(1, 1)),
                                                         PathSpec::polyline({v2(0, 0), v2(1, 0), v2(1, 1)})});
  CHECK(l.passed);
  CHECK(l.max_gap <= 1e-8);

  const auto a = annulus(0.5, 1.0, 1.0, 0.2, 0.5);
  SolutionAtlas ann(a.problem);
  const double start = pi / 2 - 8 * pi * 0.2;
  const Vector target = -a.problem->seed_x();
  const auto ar = path_independence_check(ann, target, {PathSpec::circle(v2(0, 0), 1.5, -0.5, start),
                                                        PathSpec::circle(v2(0, 0), 1.5, 0.5, start)});
  CHECK_FALSE(ar.passed);
  REQUIRE(ar.endpoints.size() == 2);
  CHECK(std::abs(std::abs(ar.endpoints[0](0) - ar.endpoints[1](0)) - 0.25) <= 1e-3);

  CHECK_THROWS_AS(path_independence_check(diode, v1(2), {PathSpec::segment(v1(0), v1(2))}), Error);
  CHECK_THROWS_AS(path_independence_check(diode, v1(2), {PathSpec::segment(v1(0), v1(2)),
                                                         PathSpec::segment(v1(0), v1(1))}),
                  Error);
}

TEST_CASE("monodromy") {
  const auto a = annulus();
  SolutionAtlas ann(a.problem);
  const MonodromyResult ar = monodromy_check(ann, *a.loop);
  CHECK_FALSE(ar.closed);
  CHECK(std::abs(std::abs(ar.delta(0)) - 0.25) <= 1e-3);
  CHECK(std::abs(ar.delta(0)) == doctest::Approx(*a.expected_gap).epsilon(1e-3));

  const auto c = circle_in_x();
  SolutionAtlas circ(c.problem);
  const MonodromyResult cr = monodromy_check(circ, *c.loop);
  CHECK_FALSE(cr.closed);
  CHECK(std::abs(cr.gap - 2 * pi) <= 1e-5);

  const auto cc = constrained_circle();
  SolutionAtlas con(cc.problem);
  const MonodromyResult ccr = monodromy_check(con, *cc.loop);
  CHECK(ccr.closed);
  CHECK(ccr.gap <= 1e-6);
  for (const auto& s : ccr.trace.samples) CHECK(residual(*cc.problem, s.x, s.y).cwiseAbs().maxCoeff() <= 1e-8);

  SolutionAtlas diode(diode_circuit().problem);
  CHECK_THROWS_AS(monodromy_check(diode, PathSpec::segment(v1(0), v1(1))), Error);
}

TEST_CASE("property: solvable examples close every loop") {
  std::mt19937_64 rng(5);
  for (const auto& name : {"diode", "line", "cubic", "linear"}) {
    CAPTURE(name);
    const auto d = make_example(name);
    SolutionAtlas atlas(d.problem);
    for (int k = 0; k < 5; ++k) {
      std::vector<Vector> pts{d.problem->seed_x()};
      for (int j = 0; j < 3; ++j) {
        Vector x = d.problem->seed_x();
        for (Eigen::Index i = 0; i < x.size(); ++i)
          x(i) = uniform(rng, std::max(-1.5, d.oracle_region->lower()(i)), std::min(4.0, d.oracle_region->upper()(i)));
        pts.push_back(x);
      }
      pts.push_back(d.problem->seed_x());
      const MonodromyResult r = monodromy_check(atlas, PathSpec::polyline(pts));
      CHECK(r.closed);
    }
    if (d.problem->m() == 2) {
      const MonodromyResult r = monodromy_check(atlas, PathSpec::circle(v2(-1, 0), 1.0, 2.0));
      CHECK(r.closed);
    }
  }
}

TEST_CASE("JSON export and import") {
  SolutionAtlas atlas(diode_circuit().problem);
  atlas.evaluate(v1(2));
  atlas.evaluate(v1(-1));
  const auto j = atlas.to_json();
  const SolutionAtlas back = SolutionAtlas::from_json(
      j, [](const std::string& name, const std::map<std::string, double>& params) {
        return make_example(name, params).problem;
      });
  REQUIRE(back.cache().size() == atlas.cache().size());
  for (std::size_t k = 0; k < atlas.cache().size(); ++k) {
    CHECK(back.cache()[k].x == atlas.cache()[k].x);
    CHECK(back.cache()[k].y == atlas.cache()[k].y);
  }
  CHECK(back.to_json().dump() == j.dump());

  auto bad = j;
  bad["samples"][1]["y"][0] = 5.0;
  CHECK_THROWS_AS(SolutionAtlas::from_json(bad, [](const std::string& n, const std::map<std::string, double>& p) {
                    return make_example(n, p).problem;
                  }),
                  Error);
}

TEST_CASE("planning in chart coordinates") {
  const auto e = exponential_problem();
  SolutionAtlas atlas(e.problem, {}, e.charts->phi);
  const PathSpec plan = atlas.plan(v1(1e-3));
  CHECK(plan.kind == PathSpec::Kind::ChartLine);
  CHECK(std::abs(atlas.evaluate(v1(1e-3))(0) - std::log(1e-3)) <= 1e-6);
  CHECK(std::abs(atlas.evaluate(v1(1e4))(0) - std::log(1e4)) <= 1e-6);
}
