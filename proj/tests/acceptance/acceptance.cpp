// Acceptance criteria 1-11: one [PASS]/[FAIL] line each, nonzero exit on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "glift/atlas.hpp"
#include "glift/certify.hpp"
#include "glift/error.hpp"
#include "glift/examples.hpp"
#include "glift/linalg.hpp"
#include "glift/scenario.hpp"
#include "glift/weights.hpp"

using namespace glift;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

Vector v1(double a) { return Vector::Constant(1, a); }
Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Outcome diode_reproduction() {
  const auto d = diode_circuit();
  SolutionAtlas atlas(d.problem);
  std::mt19937_64 rng(0);
  double worst_y = 0, worst_rel = 0;
  for (int k = 0; k < 50; ++k) {
    const double i = uniform(rng, -1.9, 10.0);
    const double want = std::log1p(i / 2.0);
    const double v = atlas.evaluate(v1(i))(0);
    worst_y = std::max(worst_y, std::abs(v - want));
    const double dg = atlas.derivative(v1(i))(0, 0);
    const double want_dg = 1.0 / (2.0 + i);  // 1 / f'(g(I)) with g(I) = ln(1 + I/2)
    worst_rel = std::max(worst_rel, std::abs(dg - want_dg) / std::abs(want_dg));
  }
  return {worst_y <= 1e-6 && worst_rel <= 1e-4, fmt("max|V - ln(1+I/2)| = %.3g, max rel dg error = %.3g", worst_y, worst_rel)};
}

Outcome growth_identity() {
  const auto d = diode_circuit();
  const Trace t = lift_path(*d.problem, PathSpec::segment(v1(-1.9), v1(10.0)), v1(std::log1p(-0.95)));
  if (!t.completed()) return {false, "trace failed: " + t.message};
  const CheckResult r = growth_bound_check(*d.problem, t, *d.charts, affine_weight(1, 1));
  double worst = 0;
  for (double lhs : r.lhs) worst = std::max(worst, std::abs(lhs - 1.0));
  return {worst <= 1e-6 && r.verdict == Verdict::Pass,
          fmt("%zu samples, max|LHS - 1| = %.3g, verdict %s", r.samples_checked, worst,
              std::string(to_string(r.verdict)).c_str())};
}

Outcome line_dichotomy() {
  const auto d = line_problem(std::pair{-1.0, 1.0});
  const Trace t = lift_path(*d.problem, PathSpec::polyline({v1(0), v1(0.995), v1(-0.995)}), v1(0));
  if (!t.completed()) return {false, "trace failed: " + t.message};
  const Chart tb = tangent_box_chart(Box(v1(-1), v1(1)));
  const CheckResult bad = growth_bound_check(*d.problem, t, ChartPair{identity_chart(1), tb}, affine_weight(1, 1));
  const CheckResult good = growth_bound_check(*d.problem, t, ChartPair{tb, tb}, affine_weight(1, 1));
  std::size_t edge = 0, edge_fail = 0;
  for (std::size_t k = 0; k < t.samples.size(); ++k) {
    if (std::abs(t.samples[k].y(0)) >= 0.99) {
      ++edge;
      edge_fail += bad.margin[k] < 0 ? 1 : 0;
    }
  }
  const bool ok = bad.verdict == Verdict::Fail && edge > 0 && edge_fail == edge && good.verdict == Verdict::Pass;
  return {ok, fmt("mismatched charts: %s, %zu/%zu samples with |y|>=0.99 fail; phi = psi: %s (worst margin %.3g)",
                  std::string(to_string(bad.verdict)).c_str(), edge_fail, edge,
                  std::string(to_string(good.verdict)).c_str(), good.worst_margin)};
}

Outcome annulus_monodromy() {
  const auto a = annulus(0.5, 1.0, 1.0);
  SolutionAtlas atlas(a.problem);
  const MonodromyResult r = monodromy_check(atlas, *a.loop);
  double worst = 0;
  for (const auto& s : r.trace.samples) {
    const double det = std::abs(jac_y(*a.problem, s.x, s.y).determinant());
    const double want = (1.0 + s.y(1)) * 8.0 * pi;
    worst = std::max(worst, std::abs(det - want) / want);
  }
  const double gap = std::abs(r.delta(0));
  return {!r.closed && std::abs(gap - 0.25) <= 1e-3 && worst <= 1e-8,
          fmt("%s, |dy1| = %.10f, max rel det error = %.3g", r.closed ? "Closed" : "Open", gap, worst)};
}

Outcome circle_gap() {
  const auto c = circle_in_x();
  SolutionAtlas atlas(c.problem);
  const MonodromyResult r = monodromy_check(atlas, *c.loop);
  return {!r.closed && std::abs(r.gap - 2 * pi) <= 1e-5,
          fmt("%s, gap - 2pi = %.3g", r.closed ? "Closed" : "Open", r.gap - 2 * pi)};
}

Outcome overdetermined_circle() {
  const auto cc = constrained_circle();
  SolutionAtlas atlas(cc.problem);
  const MonodromyResult r = monodromy_check(atlas, *cc.loop);
  double worst = 0;
  for (const auto& s : r.trace.samples)
    worst = std::max(worst, residual(*cc.problem, s.x, s.y).cwiseAbs().maxCoeff());
  return {r.trace.completed() && worst <= 1e-8 && r.closed && r.gap <= 1e-6,
          fmt("%zu samples, max residual component %.3g, %s with gap %.3g", r.trace.samples.size(), worst,
              r.closed ? "Closed" : "Open", r.gap)};
}

Outcome left_inverse_contract() {
  std::mt19937_64 rng(0);
  std::uniform_int_distribution<int> dim(1, 6);
  double worst = 0;
  int raised = 0, deficient = 0, full = 0;
  auto random_matrix = [&](Eigen::Index r, Eigen::Index c) {
    Matrix a(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) a(i, j) = uniform(rng, -1, 1);
    return a;
  };
  while (full < 1000) {
    const int l = dim(rng);
    const int n = std::uniform_int_distribution<int>(1, l)(rng);
    const Matrix j = random_matrix(l, n);
    if (smallest_singular_value(j) < 1e-6) continue;  // keep the sample well inside full rank
    ++full;
    worst = std::max(worst, (left_inverse(j) * j - Matrix::Identity(n, n)).norm());

    const Matrix deficient_j = n == 1 ? Matrix(Matrix::Zero(l, 1)) : Matrix(random_matrix(l, n - 1) * random_matrix(n - 1, n));
    ++deficient;
    try {
      left_inverse(deficient_j);
    } catch (const Error& e) {
      raised += e.kind() == ErrorKind::RankDeficient ? 1 : 0;
    }
  }
  return {worst <= 1e-8 && raised == deficient,
          fmt("max |S J - I| = %.3g over %d matrices; RankDeficient raised %d/%d", worst, full, raised, deficient)};
}

Outcome path_independence() {
  std::mt19937_64 rng(0);
  double worst = 0;
  std::string where;
  for (const char* name : {"diode", "cubic", "linear"}) {
    const auto d = make_example(name);
    SolutionAtlas atlas(d.problem);
    const Box& region = *d.oracle_region;
    auto point = [&] {
      Vector x(region.dim());
      for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i) = uniform(rng, std::max(-1.9, region.lower()(i)), std::min(5.0, region.upper()(i)));
      return x;
    };
    for (int k = 0; k < 20; ++k) {
      const Vector target = point();
      std::vector<PathSpec> pair;
      for (int p = 0; p < 2; ++p) pair.push_back(PathSpec::polyline({d.problem->seed_x(), point(), point(), target}));
      const PathIndependenceReport r = path_independence_check(atlas, target, pair);
      if (r.max_gap > worst) {
        worst = r.max_gap;
        where = name;
      }
    }
  }
  return {worst <= 1e-6, fmt("60 polyline pairs, max endpoint gap %.3g (%s)", worst, where.c_str())};
}

Outcome jacobian_cross_check() {
  std::mt19937_64 rng(0);
  double worst = 0;
  std::size_t points = 0;
  for (const auto& name : example_names()) {
    const auto d = make_example(name);
    const ImplicitProblem& p = *d.problem;
    const double y_spread = name == "annulus" ? 0.05 : 0.5;
    int got = 0;
    while (got < 100) {
      Vector x = p.seed_x(), y = p.seed_y();
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += uniform(rng, -0.5, 0.5);
      for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += uniform(rng, -y_spread, y_spread);
      if (!p.domain_x().contains(x) || !p.domain_y().contains(y)) continue;
      ++got;
      const Matrix ax = jac_x(p, x, y), ay = jac_y(p, x, y);
      worst = std::max(worst, (ax - numeric_jac_x(p, x, y)).norm() / std::max(1.0, ax.norm()));
      worst = std::max(worst, (ay - numeric_jac_y(p, x, y)).norm() / std::max(1.0, ay.norm()));
    }
    points += got;
  }
  return {worst <= 1e-5, fmt("%zu points over %zu examples, max rel difference %.3g", points, example_names().size(), worst)};
}

Outcome weight_audit() {
  const AdmissibilityReport affine = check_weight(affine_weight(1, 1), 100);
  const AdmissibilityReport constant = check_weight(constant_weight(3), 100);
  const AdmissibilityReport expo = check_weight(user_weight("exp", [](double t) { return std::exp(t); }), 100);
  const AdmissibilityReport decreasing = check_weight(user_weight("1/(1+t)", [](double t) { return 1 / (1 + t); }), 100);
  const bool ok = affine.admissible() && constant.admissible() && !expo.divergent && !expo.admissible() &&
                  !decreasing.nondecreasing && !decreasing.admissible();
  return {ok, fmt("t+1 %s, 3 %s, e^t %s (divergent=%d), 1/(1+t) %s (nondecreasing=%d)",
                  std::string(to_string(affine.verdict)).c_str(), std::string(to_string(constant.verdict)).c_str(),
                  std::string(to_string(expo.verdict)).c_str(), expo.divergent,
                  std::string(to_string(decreasing.verdict)).c_str(), decreasing.nondecreasing)};
}

Outcome determinism() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(GLIFT_SCENARIO_DIR))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::size_t same = 0;
  for (const auto& f : files) {
    const auto cfg = load_json_file(f);
    same += dump_summary(run_scenario(cfg).summary) == dump_summary(run_scenario(cfg).summary) ? 1 : 0;
  }
  return {!files.empty() && same == files.size(), fmt("%zu/%zu scenarios byte-identical on rerun", same, files.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"diode reproduction", diode_reproduction},
      {"growth-bound identity", growth_identity},
      {"line chart dichotomy", line_dichotomy},
      {"annulus monodromy", annulus_monodromy},
      {"circle monodromy", circle_gap},
      {"overdetermined circle", overdetermined_circle},
      {"left-inverse contract", left_inverse_contract},
      {"path independence", path_independence},
      {"Jacobian cross-check", jacobian_cross_check},
      {"weight audit", weight_audit},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
