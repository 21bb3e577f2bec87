#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "glift/atlas.hpp"
#include "glift/examples.hpp"

namespace glift {

/// Resolved problem section of a scenario: a bundled example or an inline
/// definition wrapped in a descriptor without oracle.
ExampleDescriptor problem_from_json(const nlohmann::json& j);

/// Path objects: {"segment": [a, b]}, {"polyline": [p0, p1, ...]},
/// {"circle": {"center", "radius", "turns", "start_angle", "axes"}},
/// {"chart_line": [a~, b~]} (in phi coordinates), or the strings "demo" and
/// "loop" for the descriptor's designated paths.
PathSpec path_from_json(const nlohmann::json& j, const ExampleDescriptor& d,
                        const std::optional<ChartPair>& charts = std::nullopt);

/// Chart section {"phi": spec, "psi": spec} or "recommended". Specs are
/// "identity", "tangent-box" (over the problem's domain box), {"affine":
/// {"A", "b"}}, {"tangent-box": {"lower", "upper"}} or, for psi in the scalar
/// case, {"scalar-solution": "<expression in y1>"} giving psi = phi o f.
ChartPair charts_from_json(const nlohmann::json& j, const ExampleDescriptor& d);

TracerOptions tracer_options_from_json(const nlohmann::json& j);

struct ScenarioResult {
  nlohmann::json summary;
  bool passed = false;
};

/// Runs every command of a scenario in order against one atlas. When
/// `out_dir` is set (or the config names an output directory) traces and
/// reports are written there. Malformed configs throw ConfigParse or
/// UnknownExample; numerical failures become report entries.
ScenarioResult run_scenario(const nlohmann::json& config, std::optional<std::filesystem::path> out_dir = std::nullopt);

/// Loads a JSON document, mapping I/O and syntax errors to ConfigParse.
nlohmann::json load_json_file(const std::filesystem::path& path);

/// Stable text form of a summary (2-space indent, trailing newline).
std::string dump_summary(const nlohmann::json& summary);

}  // namespace glift
