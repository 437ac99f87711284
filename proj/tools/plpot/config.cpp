#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "plpot/errors.hpp"

namespace plpot::cli {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double q_value(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  }
  config_error("weight values must be numbers or \"inf\", got " + v.dump());
}

std::vector<double> constant_q(const json& spec, std::size_t n) {
  return std::vector<double>(n, spec.contains("q") ? q_value(spec.at("q")) : 0.0);
}

}  // namespace

json parse_config(const std::string& text, const std::string& source) {
  try {
    return json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    config_error(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

void apply_override(json& config, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) config_error("override must look like key=value: " + assignment);
  std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    auto dot = key.find('.', start);
    std::string part = key.substr(start, dot - start);
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

const json& require(const json& config, const std::string& key) {
  if (!config.is_object() || !config.contains(key)) config_error("missing field '" + key + "'");
  return config.at(key);
}

double number(const json& config, const std::string& key) {
  const auto& v = require(config, key);
  if (!v.is_number()) config_error("field '" + key + "' must be a number, got " + v.dump());
  return v.get<double>();
}

double number_or(const json& config, const std::string& key, double fallback) {
  return config.contains(key) ? number(config, key) : fallback;
}

int integer(const json& config, const std::string& key) {
  const auto& v = require(config, key);
  if (!v.is_number_integer()) config_error("field '" + key + "' must be an integer, got " + v.dump());
  return v.get<int>();
}

int integer_or(const json& config, const std::string& key, int fallback) {
  return config.contains(key) ? integer(config, key) : fallback;
}

ConvexBody body_from(const json& spec) {
  if (spec.is_string()) {
    auto name = spec.get<std::string>();
    if (name == "quadrilateral") return build_body(std::vector<std::vector<long long>>{{0, 0}, {1, 0}, {0, 1}, {1, 2}});
    if (name == "interval") return build_body(std::vector<std::vector<long long>>{{0}, {1}});
    if (name.rfind("simplex", 0) == 0 && name.size() > 7) return simplex_body(std::stoi(name.substr(7)));
    config_error("unknown body name '" + name + "'");
  }
  if (spec.contains("simplex")) return simplex_body(integer(spec, "simplex"));
  const auto& verts = require(spec, "vertices");
  if (!verts.is_array() || verts.empty()) config_error("'vertices' must be a nonempty array");
  std::vector<RationalVector> pts;
  for (const auto& v : verts) {
    if (!v.is_array()) config_error("each vertex must be an array, got " + v.dump());
    RationalVector p;
    for (const auto& c : v) {
      if (c.is_number_integer()) p.emplace_back(c.get<long long>());
      else if (c.is_string()) p.push_back(parse_rational(c.get<std::string>()));
      else config_error("vertex coordinates must be integers or \"p/q\" strings, got " + c.dump());
    }
    pts.push_back(std::move(p));
  }
  return build_body(pts);
}

Complex complex_from(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  config_error("complex numbers are written as a number or [re, im], got " + v.dump());
}

CVector point_from(const json& v) {
  if (!v.is_array()) config_error("a point is an array of complex coordinates, got " + v.dump());
  CVector z;
  for (const auto& c : v) z.push_back(complex_from(c));
  return z;
}

std::vector<CVector> points_from(const json& v) {
  if (!v.is_array()) config_error("expected an array of points, got " + v.dump());
  std::vector<CVector> out;
  for (const auto& p : v) out.push_back(point_from(p));
  return out;
}

json to_json(Complex c) { return json::array({c.real(), c.imag()}); }

json to_json(const CVector& z) {
  json a = json::array();
  for (auto c : z) a.push_back(to_json(c));
  return a;
}

SampledWeightedSet generate_set(const json& spec) {
  const auto& g = require(spec, "generator");
  if (!g.is_string()) config_error("'generator' must be a string");
  const auto name = g.get<std::string>();
  if (name == "circle") {
    auto s = circle_sample(integer(spec, "count"), number_or(spec, "radius", 1.0),
                           spec.contains("center") ? complex_from(spec.at("center")) : Complex{});
    return spec.contains("q") ? with_weights(s, constant_q(spec, s.size())) : s;
  }
  if (name == "torus") {
    const auto& counts = require(spec, "counts");
    if (!counts.is_array() || counts.size() != 2) config_error("'counts' must hold two integers");
    double r1 = 1.0, r2 = 1.0;
    if (spec.contains("radii")) {
      const auto& r = spec.at("radii");
      if (!r.is_array() || r.size() != 2) config_error("'radii' must hold two numbers");
      r1 = r[0].get<double>();
      r2 = r[1].get<double>();
    }
    auto s = torus_sample(counts[0].get<int>(), counts[1].get<int>(), r1, r2);
    return spec.contains("q") ? with_weights(s, constant_q(spec, s.size())) : s;
  }
  if (name == "interval") {
    auto s = interval_sample(integer(spec, "count"), number_or(spec, "lo", -1.0), number_or(spec, "hi", 1.0));
    return spec.contains("q") ? with_weights(s, constant_q(spec, s.size())) : s;
  }
  if (name == "list") {
    auto pts = points_from(require(spec, "points"));
    std::vector<double> q(pts.size(), 0.0);
    if (spec.contains("q")) {
      const auto& qs = spec.at("q");
      if (!qs.is_array() || qs.size() != pts.size()) config_error("'q' must list one weight per point");
      for (std::size_t i = 0; i < pts.size(); ++i) q[i] = q_value(qs[i]);
    }
    std::optional<double> mesh;
    if (spec.contains("mesh")) mesh = number(spec, "mesh");
    return list_sample(std::move(pts), std::move(q), mesh, spec.value("label", std::string("list")));
  }
  throw Error(ErrorKind::UnknownGenerator, "unknown set generator '" + name + "'");
}

GridSpec grid_from(const json& spec) {
  GridSpec g;
  g.base = point_from(require(spec, "base"));
  const auto& axes = require(spec, "axes");
  if (!axes.is_array() || axes.empty()) config_error("'axes' must be a nonempty array");
  for (const auto& a : axes) {
    std::string name = a.value("name", "axis" + std::to_string(g.axes.size()));
    int coord = integer(a, "coord");
    std::string part = a.value("part", std::string("re"));
    if (part != "re" && part != "im") config_error("axis part must be \"re\" or \"im\"");
    AxisPart ap = part == "re" ? AxisPart::Re : AxisPart::Im;
    if (coord < 0 || static_cast<std::size_t>(coord) >= g.base.size())
      config_error("axis '" + name + "' addresses coordinate " + std::to_string(coord) + " outside the base point");
    if (a.contains("values")) {
      GridAxis ax{name, coord, ap, {}};
      for (const auto& v : a.at("values")) ax.values.push_back(v.get<double>());
      if (ax.values.empty()) config_error("axis '" + name + "' has no values");
      g.axes.push_back(std::move(ax));
    } else {
      g.axes.push_back(linspace_axis(name, coord, ap, number(a, "lo"), number(a, "hi"), integer(a, "count")));
    }
  }
  return g;
}

}  // namespace plpot::cli
