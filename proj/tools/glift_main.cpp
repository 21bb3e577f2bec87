// glift: command-line front end for scenario runs, traces and certificates.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glift/certify.hpp"
#include "glift/error.hpp"
#include "glift/examples.hpp"
#include "glift/scenario.hpp"

namespace {

using json = nlohmann::json;

// GLIFT_LOG=quiet|info|debug (default info).
int log_level() {
  const char* v = std::getenv("GLIFT_LOG");
  if (!v) return 1;
  const std::string s(v);
  if (s == "quiet" || s == "0") return 0;
  if (s == "debug" || s == "2") return 2;
  return 1;
}

json parse_inline(const std::string& text, const char* what) {
  if (text.empty() || (text.front() != '{' && text.front() != '[')) return json(text);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw glift::Error(glift::ErrorKind::ConfigParse, std::string(what) + ": " + e.what());
  }
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    char* end = nullptr;
    const double v = eq == std::string::npos ? 0.0 : std::strtod(item.c_str() + eq + 1, &end);
    if (eq == std::string::npos || end == item.c_str() + eq + 1 || *end != '\0') {
      throw glift::Error(glift::ErrorKind::ConfigParse, "--param expects key=value, got '" + item + "'");
    }
    out[item.substr(0, eq)] = v;
  }
  return out;
}

int cmd_run(const std::string& config_path, const std::string& out) {
  const json config = glift::load_json_file(config_path);
  std::optional<std::filesystem::path> dir;
  if (!out.empty()) dir = out;
  const glift::ScenarioResult r = glift::run_scenario(config, dir);
  if (log_level() >= 1) {
    for (const auto& c : r.summary.value("commands", json::array())) {
      std::fprintf(stderr, "%-4s %-20s %-18s expected=%s observed=%s\n", c.value("ok", false) ? "ok" : "FAIL",
                   c.value("id", std::string()).c_str(), c.value("type", std::string()).c_str(),
                   c.value("expected", std::string("-")).c_str(), c.value("observed", std::string("-")).c_str());
    }
    if (r.summary.contains("error")) std::fprintf(stderr, "error: %s\n", r.summary["error"].dump().c_str());
  }
  if (log_level() >= 2 || dir == std::nullopt) std::cout << glift::dump_summary(r.summary);
  return r.passed ? 0 : 1;
}

int cmd_list() {
  std::printf("%-20s %-34s %s\n", "name", "tags", "summary");
  for (const auto& name : glift::example_names()) {
    const glift::ExampleDescriptor d = glift::make_example(name);
    std::string tags;
    for (auto t : d.tags) tags += (tags.empty() ? "" : ",") + std::string(glift::to_string(t));
    std::printf("%-20s %-34s %s\n", name.c_str(), tags.c_str(), d.summary.c_str());
  }
  return 0;
}

int cmd_trace(const std::string& example, const std::map<std::string, double>& params, const std::string& path_text,
              const std::string& out) {
  const glift::ExampleDescriptor d = glift::make_example(example, params);
  const glift::PathSpec path = glift::path_from_json(parse_inline(path_text, "--path"), d, d.charts);
  glift::SolutionAtlas atlas(d.problem);
  const glift::Trace t = atlas.lift(path);
  std::filesystem::create_directories(out);
  const auto file = std::filesystem::path(out) / ("trace_" + example + ".csv");
  std::ofstream(file) << glift::trace_to_csv(t);
  std::printf("%s: %zu samples, status %s -> %s\n", example.c_str(), t.samples.size(),
              std::string(glift::to_string(t.status)).c_str(), file.string().c_str());
  return t.completed() ? 0 : 1;
}

int cmd_certify(const std::string& example, const std::map<std::string, double>& params, const std::string& charts_text,
                const std::string& weight_text, const std::string& path_text) {
  const glift::ExampleDescriptor d = glift::make_example(example, params);
  // Examples without a recommendation are audited in identity charts.
  const json charts_spec = charts_text == "recommended" && !d.charts ? json::object() : parse_inline(charts_text, "--charts");
  const glift::ChartPair charts = glift::charts_from_json(charts_spec, d);
  const glift::Weight w = weight_text.empty() ? (d.weight ? *d.weight : glift::affine_weight(1.0, 1.0))
                                              : glift::parse_weight(weight_text);
  glift::SolutionAtlas atlas(d.problem);
  const glift::Trace t = atlas.lift(glift::path_from_json(parse_inline(path_text, "--path"), d, charts));

  glift::CertificateReport report;
  report.checks.push_back(glift::growth_bound_check(*d.problem, t, charts, w));
  report.checks.push_back(glift::left_invertibility_check(*d.problem, t));
  const glift::AdmissibilityReport wr = glift::check_weight(w, 100.0);

  std::printf("%-20s %-15s %-24s %s\n", "check", "verdict", "worst margin", "samples");
  for (const auto& c : report.checks) {
    std::printf("%-20s %-15s %-24.17g %zu\n", c.name.c_str(), std::string(glift::to_string(c.verdict)).c_str(),
                c.worst_margin, c.samples_checked);
  }
  std::printf("%-20s %-15s\n", "weight", std::string(glift::to_string(wr.verdict)).c_str());
  if (!t.completed()) std::printf("trace ended early: %s\n", t.message.c_str());
  return report.passed() && wr.admissible() && t.completed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"global implicit functions by path lifting"};
  app.require_subcommand(1);

  std::string config, out, example, path = "demo", charts = "recommended", weight;
  std::vector<std::string> params;
  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config, "scenario JSON file")->required();
  run->add_option("--out", out, "output directory (overrides the config)");

  app.add_subcommand("list", "list bundled examples");

  auto* trace = app.add_subcommand("trace", "lift a path on a bundled example");
  trace->add_option("--example", example)->required();
  trace->add_option("--param", params, "example parameter key=value (repeatable)");
  trace->add_option("--path", path, "\"demo\", \"loop\" or a JSON path object");
  trace->add_option("--out", out)->default_val(".");

  auto* certify = app.add_subcommand("certify", "audit the hypotheses along the demo path");
  certify->add_option("--example", example)->required();
  certify->add_option("--param", params, "example parameter key=value (repeatable)");
  certify->add_option("--charts", charts, "\"recommended\" or a JSON chart object");
  certify->add_option("--weight", weight, "constant:c, affine:a,b or table:path");
  certify->add_option("--path", path, "\"demo\", \"loop\" or a JSON path object");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, out);
    if (app.got_subcommand("list")) return cmd_list();
    if (*trace) return cmd_trace(example, parse_params(params), path, out);
    if (*certify) return cmd_certify(example, parse_params(params), charts, weight, path);
  } catch (const glift::Error& e) {
    const json err = {{"error", {{"kind", std::string(glift::to_string(e.kind()))}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 2;
}
