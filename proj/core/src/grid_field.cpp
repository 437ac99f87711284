#include "plpot/grid_field.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "plpot/errors.hpp"

namespace plpot {

using nlohmann::json;

GridAxis linspace_axis(std::string name, int coord, AxisPart part, double lo, double hi, int count) {
  if (count < 1) throw Error(ErrorKind::PreconditionViolation, "axis needs at least one value");
  GridAxis a{std::move(name), coord, part, {}};
  for (int i = 0; i < count; ++i)
    a.values.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return a;
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

std::vector<std::size_t> GridSpec::shape() const {
  std::vector<std::size_t> s;
  for (const auto& a : axes) s.push_back(a.values.size());
  return s;
}

CVector GridSpec::point(std::size_t flat) const {
  CVector z = base;
  for (std::size_t k = axes.size(); k-- > 0;) {
    const auto& a = axes[k];
    std::size_t i = flat % a.values.size();
    flat /= a.values.size();
    if (a.coord < 0 || static_cast<std::size_t>(a.coord) >= z.size())
      throw Error(ErrorKind::DimensionMismatch, "axis coordinate outside the base point");
    auto& c = z[a.coord];
    if (a.part == AxisPart::Re) c.real(a.values[i]);
    else c.imag(a.values[i]);
  }
  return z;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::filesystem::path meta_path(const std::filesystem::path& csv) {
  return std::filesystem::path(csv.string() + ".meta.json");
}

void write_meta(const Meta& meta, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  out << json(meta).dump(2) << "\n";
}

Meta read_meta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read " + path.string());
  return json::parse(in).get<Meta>();
}

void write_grid(const GridField& field, const std::filesystem::path& csv) {
  if (field.values.size() != field.spec.size())
    throw Error(ErrorKind::DimensionMismatch, "field values do not match grid shape");
  std::ofstream out(csv);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + csv.string());
  for (const auto& a : field.spec.axes) out << a.name << ",";
  out << "value\n";
  const auto shape = field.spec.shape();
  std::vector<std::size_t> idx(shape.size(), 0);
  for (std::size_t flat = 0; flat < field.values.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t k = shape.size(); k-- > 0;) {
      idx[k] = rem % shape[k];
      rem /= shape[k];
    }
    for (std::size_t k = 0; k < shape.size(); ++k)
      out << format_double(field.spec.axes[k].values[idx[k]]) << ",";
    out << format_double(field.values[flat]) << "\n";
  }

  json side;
  side["meta"] = field.meta;
  json base = json::array();
  for (const auto& c : field.spec.base) base.push_back({format_double(c.real()), format_double(c.imag())});
  side["grid"]["base"] = base;
  json axes = json::array();
  for (const auto& a : field.spec.axes) {
    std::vector<std::string> vals;
    for (double v : a.values) vals.push_back(format_double(v));
    axes.push_back({{"name", a.name},
                    {"coord", a.coord},
                    {"part", a.part == AxisPart::Re ? "re" : "im"},
                    {"values", vals}});
  }
  side["grid"]["axes"] = axes;
  std::ofstream m(meta_path(csv));
  if (!m) throw Error(ErrorKind::ConfigError, "cannot write " + meta_path(csv).string());
  m << side.dump(2) << "\n";
}

GridField read_grid(const std::filesystem::path& csv) {
  std::ifstream m(meta_path(csv));
  if (!m) throw Error(ErrorKind::ConfigError, "missing sidecar " + meta_path(csv).string());
  json side = json::parse(m);
  GridField f;
  f.meta = side.at("meta").get<Meta>();
  for (const auto& c : side.at("grid").at("base"))
    f.spec.base.emplace_back(std::stod(c.at(0).get<std::string>()),
                             std::stod(c.at(1).get<std::string>()));
  for (const auto& a : side.at("grid").at("axes")) {
    GridAxis ax;
    ax.name = a.at("name").get<std::string>();
    ax.coord = a.at("coord").get<int>();
    ax.part = a.at("part").get<std::string>() == "im" ? AxisPart::Im : AxisPart::Re;
    for (const auto& v : a.at("values")) ax.values.push_back(std::stod(v.get<std::string>()));
    f.spec.axes.push_back(std::move(ax));
  }

  std::ifstream in(csv);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read " + csv.string());
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto pos = line.rfind(',');
    f.values.push_back(std::stod(pos == std::string::npos ? line : line.substr(pos + 1)));
  }
  if (f.values.size() != f.spec.size())
    throw Error(ErrorKind::ConfigError, "CSV row count does not match the grid in the sidecar");
  return f;
}

}  // namespace plpot
