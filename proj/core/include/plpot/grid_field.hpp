#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "plpot/indicator.hpp"

namespace plpot {

enum class AxisPart { Re, Im };

/// One real grid dimension: sets Re or Im of coordinate `coord` of the base point.
struct GridAxis {
  std::string name;
  int coord = 0;
  AxisPart part = AxisPart::Re;
  std::vector<double> values;
};

GridAxis linspace_axis(std::string name, int coord, AxisPart part, double lo, double hi, int count);

/// Rectangular grid through a base point. The last axis varies fastest.
struct GridSpec {
  CVector base;
  std::vector<GridAxis> axes;

  std::size_t size() const;
  std::vector<std::size_t> shape() const;
  CVector point(std::size_t flat) const;
};

using Meta = std::map<std::string, std::string>;

struct GridField {
  GridSpec spec;
  std::vector<double> values;  // spec.size() entries
  Meta meta;
};

/// "%.17g" formatting; parses back to the same double.
std::string format_double(double v);

/// CSV with one column per axis and a final "value" column, plus a JSON
/// sidecar at `<csv>.meta.json` holding the meta record and the grid spec.
void write_grid(const GridField& field, const std::filesystem::path& csv);
GridField read_grid(const std::filesystem::path& csv);
std::filesystem::path meta_path(const std::filesystem::path& csv);

/// Writes a meta record as a flat JSON object of strings.
void write_meta(const Meta& meta, const std::filesystem::path& path);
Meta read_meta(const std::filesystem::path& path);

}  // namespace plpot
