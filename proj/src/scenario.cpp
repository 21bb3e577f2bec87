#include "glift/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "glift/certify.hpp"
#include "glift/error.hpp"
#include "glift/expression.hpp"
#include "glift/linalg.hpp"

namespace glift {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::ConfigParse, what); }

json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

double number(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  parse_error(where + ": expected a number");
}

Vector vector_of(const json& j, const std::string& where, Eigen::Index dim = -1) {
  if (!j.is_array()) parse_error(where + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], where);
  if (dim >= 0 && v.size() != dim) {
    parse_error(where + ": expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
  }
  return v;
}

Matrix matrix_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) parse_error(where + ": expected a non-empty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Matrix a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) a.row(r) = vector_of(j[static_cast<std::size_t>(r)], where, cols);
  return a;
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) parse_error(where + ": missing '" + key + "'");
  return j.at(key);
}

std::string string_of(const json& j, const std::string& where) {
  if (!j.is_string()) parse_error(where + ": expected a string");
  return j.get<std::string>();
}

Box box_of(const json& j, Eigen::Index dim, const std::string& where) {
  if (j.is_null()) return Box::unbounded(dim);
  try {
    return Box(vector_of(field(j, "lower", where), where + ".lower", dim),
               vector_of(field(j, "upper", where), where + ".upper", dim));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigParse) throw;
    parse_error(where + ": " + e.what());
  }
}

ImplicitProblem inline_problem(const json& j) {
  const std::string where = "problem.inline";
  ImplicitProblem::Definition def;
  def.name = j.value("name", std::string("inline"));
  def.m = field(j, "m", where).get<Eigen::Index>();
  def.n = field(j, "n", where).get<Eigen::Index>();
  const json& res = field(j, "residuals", where);
  if (!res.is_array() || res.empty()) parse_error(where + ".residuals: expected a non-empty array of strings");
  std::vector<Expression> exprs;
  for (const auto& r : res) exprs.push_back(Expression::parse(string_of(r, where + ".residuals"), def.m, def.n));
  def.l = static_cast<Eigen::Index>(exprs.size());
  def.residual = [exprs](const Vector& x, const Vector& y) {
    Vector out(static_cast<Eigen::Index>(exprs.size()));
    for (std::size_t i = 0; i < exprs.size(); ++i) out(static_cast<Eigen::Index>(i)) = exprs[i](x, y);
    return out;
  };
  def.domain_x = Domain(box_of(j.value("domain_x", json()), def.m, where + ".domain_x"));
  def.domain_y = Domain(box_of(j.value("domain_y", json()), def.n, where + ".domain_y"));
  def.seed_x = vector_of(field(j, "seed_x", where), where + ".seed_x", def.m);
  def.seed_y = vector_of(field(j, "seed_y", where), where + ".seed_y", def.n);
  return ImplicitProblem(std::move(def));
}

Chart chart_from_json(const json& j, const ExampleDescriptor& d, bool is_psi, const Chart* phi) {
  const Eigen::Index dim = is_psi ? d.problem->n() : d.problem->m();
  const Box& own_box = is_psi ? d.problem->domain_y().box() : d.problem->domain_x().box();
  const std::string where = is_psi ? "charts.psi" : "charts.phi";
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "identity") return identity_chart(dim);
    if (name == "tangent-box") return tangent_box_chart(own_box);
    parse_error(where + ": unknown chart '" + name + "'");
  }
  if (j.is_object() && j.contains("affine")) {
    const json& a = j.at("affine");
    const Matrix mat = matrix_of(field(a, "A", where), where + ".A");
    const Vector b = a.contains("b") ? vector_of(a.at("b"), where + ".b", dim) : Vector::Zero(dim);
    if (mat.rows() != dim) parse_error(where + ": affine matrix has the wrong size");
    return affine_chart(mat, b);
  }
  if (j.is_object() && j.contains("tangent-box")) return tangent_box_chart(box_of(j.at("tangent-box"), dim, where));
  if (j.is_object() && j.contains("scalar-solution")) {
    if (!is_psi || dim != 1 || !phi || phi->dim != 1) parse_error(where + ": scalar-solution needs scalar x and y");
    const Expression f = Expression::parse(string_of(j.at("scalar-solution"), where), 0, 1);
    ScalarMap map;
    map.value = [f](double v) { return f(Vector(0), Vector::Constant(1, v)); };
    return psi_from_scalar_solution(*phi, map, own_box);
  }
  parse_error(where + ": unrecognised chart spec");
}

Vector y_at(SolutionAtlas& atlas, const PathSpec& path) { return atlas.evaluate(Path(path).point(0.0)); }

// ---------------------------------------------------------------------------
// Commands

struct Context {
  ExampleDescriptor example;
  std::optional<ChartPair> charts;
  std::optional<Weight> weight;
  TracerOptions opts;
  std::unique_ptr<SolutionAtlas> atlas;
  std::map<std::string, Trace> traces;
  std::optional<fs::path> out_dir;
  bool write_csv = true;
  bool write_json = true;
  std::uint64_t seed = 0;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
}

void emit_trace(Context& ctx, const std::string& id, const Trace& t) {
  if (!ctx.out_dir) return;
  if (ctx.write_csv) write_file(*ctx.out_dir / ("trace_" + id + ".csv"), trace_to_csv(t));
  if (ctx.write_json) write_file(*ctx.out_dir / ("trace_" + id + ".json"), trace_to_json(t).dump(2) + "\n");
}

json trace_summary(const Trace& t) {
  json j = {{"status", std::string(to_string(t.status))}, {"samples", t.samples.size()}};
  if (!t.samples.empty()) {
    j["final_x"] = vec_json(t.back().x);
    j["final_y"] = vec_json(t.back().y);
  }
  if (!t.completed()) {
    j["failure_t"] = t.failure_t;
    j["message"] = t.message;
  }
  return j;
}

std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// A command meets an expectation when the observed label matches, case-insensitively.
bool matches(const json& cmd, const std::string& fallback, const std::string& observed, json& out) {
  const std::string expected = cmd.contains("expect") ? string_of(cmd.at("expect"), "command.expect") : fallback;
  out["expected"] = expected;
  out["observed"] = observed;
  return lowercase(expected) == lowercase(observed);
}

bool run_evaluate(Context& ctx, const json& cmd, json& out) {
  const Vector x = vector_of(field(cmd, "x", "evaluate"), "evaluate.x", ctx.example.problem->m());
  const Vector y = ctx.atlas->evaluate(x);
  out["x"] = vec_json(x);
  out["y"] = vec_json(y);
  out["residual"] = residual(*ctx.example.problem, x, y).norm();
  if (cmd.value("derivative", false)) {
    const Matrix dg = ctx.atlas->derivative(x);
    json rows = json::array();
    for (Eigen::Index r = 0; r < dg.rows(); ++r) rows.push_back(vec_json(dg.row(r).transpose()));
    out["derivative"] = rows;
  }
  bool ok = matches(cmd, "Reachable", "Reachable", out);
  if (cmd.contains("expect_y")) {
    const Vector want = vector_of(cmd.at("expect_y"), "evaluate.expect_y", ctx.example.problem->n());
    const double tol = cmd.value("tol", 1e-6);
    out["error"] = (y - want).norm();
    ok = ok && (y - want).norm() <= tol;
  }
  return ok;
}

bool run_trace(Context& ctx, const std::string& id, const json& cmd, json& out) {
  const PathSpec path = path_from_json(field(cmd, "path", "trace"), ctx.example, ctx.charts);
  const Vector y0 = cmd.contains("y_start")
                        ? vector_of(cmd.at("y_start"), "trace.y_start", ctx.example.problem->n())
                        : y_at(*ctx.atlas, path);
  TracerOptions opts = ctx.opts;
  if (cmd.value("certificate", false) && ctx.charts && ctx.weight) {
    opts.cert_charts = ctx.charts;
    opts.cert_weight = ctx.weight;
  }
  const Trace t = lift_path(*ctx.example.problem, path, y0, opts);
  ctx.traces[id] = t;
  emit_trace(ctx, id, t);
  out["trace"] = trace_summary(t);
  return matches(cmd, "Completed", std::string(to_string(t.status)), out);
}

const Trace& trace_for(Context& ctx, const std::string& id, const json& cmd) {
  if (cmd.contains("trace")) {
    const auto ref = string_of(cmd.at("trace"), "certify.trace");
    const auto it = ctx.traces.find(ref);
    if (it == ctx.traces.end()) parse_error("certify.trace: no earlier trace with id '" + ref + "'");
    return it->second;
  }
  const PathSpec path = path_from_json(cmd.value("path", json("demo")), ctx.example, ctx.charts);
  Trace t = ctx.atlas->lift(path);
  emit_trace(ctx, id, t);
  return ctx.traces[id] = std::move(t);
}

bool run_certify(Context& ctx, const std::string& id, const json& cmd, json& out) {
  const ImplicitProblem& p = *ctx.example.problem;
  const Trace& trace = trace_for(ctx, id, cmd);
  if (!trace.completed()) out["trace_status"] = std::string(to_string(trace.status));
  CertifyOptions copts;
  copts.refine_midpoints = cmd.value("refine", false);
  CertificateReport report;
  json extra = json::array();
  bool all_pass = true;
  const json checks = cmd.value("checks", json::array({"growth", "left_invertibility"}));
  for (const auto& c : checks) {
    const std::string name = c.is_string() ? c.get<std::string>() : (c.is_object() && !c.empty() ? c.begin().key() : "");
    const json arg = c.is_object() && !c.empty() ? c.begin().value() : json();
    if (name == "growth") {
      if (!ctx.charts || !ctx.weight) parse_error("certify: growth check needs charts and weight");
      report.checks.push_back(growth_bound_check(p, trace, *ctx.charts, *ctx.weight, copts));
    } else if (name == "left_invertibility") {
      std::optional<double> floor;
      if (arg.is_number()) floor = arg.get<double>();
      report.checks.push_back(left_invertibility_check(p, trace, floor, copts));
    } else if (name == "uniform_bound") {
      report.checks.push_back(uniform_bound_check(p, trace, number(arg, "certify.uniform_bound"), copts));
    } else if (name == "diagonal_dominance") {
      std::vector<std::pair<Vector, Vector>> pts;
      for (const auto& s : trace.samples) pts.emplace_back(s.x, s.y);
      report.checks.push_back(diagonal_dominance_check(p, pts, number(arg, "certify.diagonal_dominance")));
    } else if (name == "weight") {
      if (!ctx.weight) parse_error("certify: weight check needs a weight");
      const double grid_max = arg.is_number() ? arg.get<double>() : 100.0;
      const AdmissibilityReport w = check_weight(*ctx.weight, grid_max);
      all_pass = all_pass && w.admissible();
      extra.push_back({{"name", "weight"},
                       {"verdict", std::string(to_string(w.verdict))},
                       {"positive", w.positive},
                       {"nondecreasing", w.nondecreasing},
                       {"divergent", w.divergent},
                       {"heuristic", w.divergence_heuristic}});
    } else if (name == "chart_independence") {
      if (!ctx.charts) parse_error("certify: chart_independence needs charts");
      const ChartPair alt = charts_from_json(arg, ctx.example);
      json probe = to_json(chart_independence_probe(trace, *ctx.charts, alt));
      probe["name"] = "chart_independence";
      extra.push_back(std::move(probe));
    } else {
      parse_error("certify: unknown check '" + name + "'");
    }
  }
  json list = to_json(report)["checks"];
  for (auto& e : extra) list.push_back(std::move(e));
  out["checks"] = std::move(list);
  all_pass = all_pass && report.passed();
  return matches(cmd, "pass", all_pass ? "pass" : "fail", out);
}

bool run_monodromy(Context& ctx, const std::string& id, const json& cmd, json& out) {
  const PathSpec loop = path_from_json(cmd.value("loop", json("loop")), ctx.example, ctx.charts);
  const MonodromyResult r = monodromy_check(*ctx.atlas, loop);
  emit_trace(ctx, id, r.trace);
  out["gap"] = r.gap;
  out["delta"] = vec_json(r.delta);
  out["threshold"] = r.threshold;
  bool ok = matches(cmd, "Closed", r.closed ? "Closed" : "Open", out);
  if (cmd.contains("expect_gap")) {
    const double want = number(cmd.at("expect_gap"), "monodromy.expect_gap");
    ok = ok && std::abs(r.gap - want) <= cmd.value("gap_tol", 1e-3);
  }
  return ok;
}

bool run_path_independence(Context& ctx, const json& cmd, json& out) {
  const Vector target = vector_of(field(cmd, "target", "path-independence"), "path-independence.target",
                                  ctx.example.problem->m());
  std::vector<PathSpec> paths;
  for (const auto& pj : field(cmd, "paths", "path-independence")) paths.push_back(path_from_json(pj, ctx.example, ctx.charts));
  const PathIndependenceReport r = path_independence_check(*ctx.atlas, target, paths);
  json ends = json::array();
  for (const auto& e : r.endpoints) ends.push_back(vec_json(e));
  out["endpoints"] = std::move(ends);
  out["max_gap"] = r.max_gap;
  out["threshold"] = r.threshold;
  return matches(cmd, "pass", r.passed ? "pass" : "fail", out);
}

bool run_oracle(Context& ctx, const json& cmd, json& out) {
  if (!ctx.example.oracle || !ctx.example.oracle_region) parse_error("oracle: problem has no oracle");
  const Box& region = *ctx.example.oracle_region;
  const int samples = cmd.value("samples", 20);
  const double tol = cmd.value("tol", 1e-6);
  std::mt19937_64 rng(ctx.seed);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    Vector x(region.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x(i) = std::uniform_real_distribution<double>(region.lower()(i), region.upper()(i))(rng);
    }
    worst = std::max(worst, (ctx.atlas->evaluate(x) - ctx.example.oracle(x)).norm());
  }
  out["samples"] = samples;
  out["max_error"] = worst;
  return matches(cmd, "pass", worst <= tol ? "pass" : "fail", out);
}

}  // namespace

// ---------------------------------------------------------------------------

ExampleDescriptor problem_from_json(const json& j) {
  if (!j.is_object()) parse_error("problem: expected an object");
  if (j.contains("example")) {
    std::map<std::string, double> params;
    if (j.contains("params")) {
      for (const auto& [k, v] : j.at("params").items()) params[k] = number(v, "problem.params." + k);
    }
    return make_example(string_of(j.at("example"), "problem.example"), params);
  }
  if (j.contains("inline")) {
    ExampleDescriptor d;
    d.problem = std::make_shared<const ImplicitProblem>(inline_problem(j.at("inline")));
    d.name = d.problem->name();
    d.summary = "inline definition";
    d.demo_path = PathSpec::segment(d.problem->seed_x(), d.problem->seed_x() + Vector::Ones(d.problem->m()));
    return d;
  }
  parse_error("problem: needs 'example' or 'inline'");
}

PathSpec path_from_json(const json& j, const ExampleDescriptor& d, const std::optional<ChartPair>& charts) {
  const Eigen::Index m = d.problem->m();
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "demo") return d.demo_path;
    if (name == "loop") {
      if (!d.loop) parse_error("path: example '" + d.name + "' has no designated loop");
      return *d.loop;
    }
    parse_error("path: unknown named path '" + name + "'");
  }
  if (!j.is_object() || j.size() != 1) parse_error("path: expected an object with a single key");
  const std::string kind = j.begin().key();
  const json& v = j.begin().value();
  try {
    if (kind == "segment") {
      if (!v.is_array() || v.size() != 2) parse_error("path.segment: expected two points");
      return PathSpec::segment(vector_of(v[0], "path.segment", m), vector_of(v[1], "path.segment", m));
    }
    if (kind == "polyline") {
      std::vector<Vector> pts;
      for (const auto& p : v) pts.push_back(vector_of(p, "path.polyline", m));
      return PathSpec::polyline(std::move(pts));
    }
    if (kind == "circle") {
      const Vector center = vector_of(field(v, "center", "path.circle"), "path.circle.center", m);
      Eigen::Index ai = 0, aj = 1;
      if (v.contains("axes")) {
        ai = v.at("axes").at(0).get<Eigen::Index>();
        aj = v.at("axes").at(1).get<Eigen::Index>();
      }
      return PathSpec::circle(center, number(field(v, "radius", "path.circle"), "path.circle.radius"),
                              v.contains("turns") ? number(v.at("turns"), "path.circle.turns") : 1.0,
                              v.contains("start_angle") ? number(v.at("start_angle"), "path.circle.start_angle") : 0.0,
                              ai, aj);
    }
    if (kind == "chart_line") {
      if (!charts) parse_error("path.chart_line: scenario has no charts");
      if (!v.is_array() || v.size() != 2) parse_error("path.chart_line: expected two points");
      return PathSpec::chart_line(vector_of(v[0], "path.chart_line", m), vector_of(v[1], "path.chart_line", m),
                                  std::make_shared<const Chart>(charts->phi));
    }
  } catch (const json::exception& e) {
    parse_error(std::string("path: ") + e.what());
  }
  parse_error("path: unknown kind '" + kind + "'");
}

ChartPair charts_from_json(const json& j, const ExampleDescriptor& d) {
  if (j.is_string() && j.get<std::string>() == "recommended") {
    if (!d.charts) parse_error("charts: example '" + d.name + "' has no recommended charts");
    return *d.charts;
  }
  if (!j.is_object()) parse_error("charts: expected \"recommended\" or {\"phi\", \"psi\"}");
  Chart phi = chart_from_json(j.value("phi", json("identity")), d, false, nullptr);
  Chart psi = chart_from_json(j.value("psi", json("identity")), d, true, &phi);
  return ChartPair{std::move(phi), std::move(psi)};
}

TracerOptions tracer_options_from_json(const json& j) {
  TracerOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) parse_error("tracer: expected an object");
  for (const auto& [key, v] : j.items()) {
    if (key == "trace_tol") o.trace_tol = number(v, "tracer.trace_tol");
    else if (key == "h_init") o.h_init = number(v, "tracer.h_init");
    else if (key == "h_min") o.h_min = number(v, "tracer.h_min");
    else if (key == "h_max") o.h_max = number(v, "tracer.h_max");
    else if (key == "trust_radius") o.trust_radius = number(v, "tracer.trust_radius");
    else if (key == "predictor") {
      const auto s = lowercase(string_of(v, "tracer.predictor"));
      if (s == "rk4") o.predictor = Predictor::RK4;
      else if (s == "euler") o.predictor = Predictor::Euler;
      else parse_error("tracer.predictor: expected 'rk4' or 'euler'");
    } else {
      parse_error("tracer: unknown option '" + key + "'");
    }
  }
  return o;
}

ScenarioResult run_scenario(const json& config, std::optional<fs::path> out_dir) {
  if (!config.is_object()) parse_error("scenario: expected an object");
  Context ctx;
  ctx.example = problem_from_json(field(config, "problem", "scenario"));
  if (config.contains("charts")) ctx.charts = charts_from_json(config.at("charts"), ctx.example);
  else ctx.charts = ctx.example.charts;
  if (config.contains("weight")) {
    try {
      ctx.weight = parse_weight(string_of(config.at("weight"), "weight"));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigParse) throw;
      parse_error(std::string("weight: ") + e.what());
    }
  } else {
    ctx.weight = ctx.example.weight;
  }
  ctx.opts = tracer_options_from_json(config.value("tracer", json()));
  ctx.seed = config.value("seed", std::uint64_t{0});

  const json output = config.value("output", json::object());
  if (!out_dir && output.contains("directory")) out_dir = fs::path(string_of(output.at("directory"), "output.directory"));
  if (output.contains("formats")) {
    ctx.write_csv = ctx.write_json = false;
    for (const auto& f : output.at("formats")) {
      const auto s = string_of(f, "output.formats");
      if (s == "csv") ctx.write_csv = true;
      else if (s == "json") ctx.write_json = true;
      else parse_error("output.formats: unknown format '" + s + "'");
    }
  }
  if (out_dir) {
    fs::create_directories(*out_dir);
    ctx.out_dir = out_dir;
  }

  const json& commands = field(config, "commands", "scenario");
  if (!commands.is_array()) parse_error("commands: expected an array");

  json summary;
  summary["scenario"] = config.value("name", std::string("unnamed"));
  summary["problem"] = {{"name", ctx.example.name}, {"params", ctx.example.params},
                        {"m", ctx.example.problem->m()}, {"n", ctx.example.problem->n()},
                        {"l", ctx.example.problem->l()}};
  summary["seed"] = ctx.seed;
  json results = json::array();
  bool passed = true;

  try {
    ctx.atlas = std::make_unique<SolutionAtlas>(ctx.example.problem, ctx.opts);
  } catch (const Error& e) {
    summary["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    summary["commands"] = std::move(results);
    summary["passed"] = false;
    return {summary, false};
  }

  std::size_t index = 0;
  for (const auto& cmd : commands) {
    const std::string type = string_of(field(cmd, "type", "command"), "command.type");
    const std::string id = cmd.value("id", type + "_" + std::to_string(index++));
    json out = {{"id", id}, {"type", type}};
    bool ok = false;
    try {
      if (type == "evaluate") ok = run_evaluate(ctx, cmd, out);
      else if (type == "trace") ok = run_trace(ctx, id, cmd, out);
      else if (type == "certify") ok = run_certify(ctx, id, cmd, out);
      else if (type == "monodromy") ok = run_monodromy(ctx, id, cmd, out);
      else if (type == "path-independence") ok = run_path_independence(ctx, cmd, out);
      else if (type == "oracle") ok = run_oracle(ctx, cmd, out);
      else parse_error("command: unknown type '" + type + "'");
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigParse || e.kind() == ErrorKind::UnknownExample) throw;
      out["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
      // A command may expect a specific failure, e.g. "expect": "Unreachable".
      ok = matches(cmd, "ok", std::string(to_string(e.kind())), out);
    }
    out["ok"] = ok;
    passed = passed && ok;
    if (ctx.out_dir && ctx.write_json && type != "trace") write_file(*ctx.out_dir / (id + ".json"), out.dump(2) + "\n");
    results.push_back(std::move(out));
  }
  summary["commands"] = std::move(results);
  summary["passed"] = passed;
  if (ctx.out_dir) write_file(*ctx.out_dir / "summary.json", dump_summary(summary));
  return {summary, passed};
}

json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

std::string dump_summary(const json& summary) { return summary.dump(2) + "\n"; }

}  // namespace glift
