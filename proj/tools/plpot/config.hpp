#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "plpot/convex_body.hpp"
#include "plpot/grid_field.hpp"
#include "plpot/indicator.hpp"
#include "plpot/sample_set.hpp"

namespace plpot::cli {

using nlohmann::json;

/// Parses a JSON config file; syntax errors become ConfigError with line and column.
json load_config(const std::filesystem::path& path);
json parse_config(const std::string& text, const std::string& source = "<config>");

/// Applies "key=value" overrides; the value is parsed as JSON when possible,
/// else taken as a string. Dotted keys address nested objects.
void apply_override(json& config, const std::string& assignment);

/// body: {"vertices": [[0,0],[1,0],...]} (entries may be "p/q" strings),
/// {"simplex": d}, or the name "quadrilateral".
ConvexBody body_from(const json& spec);

/// set: {"generator": "circle"|"torus"|"interval"|"list", ...}; throws UnknownGenerator.
SampledWeightedSet generate_set(const json& spec);

Complex complex_from(const json& v);
CVector point_from(const json& v);
std::vector<CVector> points_from(const json& v);
json to_json(Complex c);
json to_json(const CVector& z);

/// grid: {"base": point, "axes": [{"name", "coord", "part": "re"|"im",
///   "lo", "hi", "count"} or {"name", "coord", "part", "values": [...]}]}
GridSpec grid_from(const json& spec);

/// Field access with ConfigError naming the missing or mistyped key.
const json& require(const json& config, const std::string& key);
double number(const json& config, const std::string& key);
double number_or(const json& config, const std::string& key, double fallback);
int integer(const json& config, const std::string& key);
int integer_or(const json& config, const std::string& key, int fallback);

}  // namespace plpot::cli
