#include "plpot/sample_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "plpot/errors.hpp"

namespace plpot {

namespace {
constexpr double kPi = std::numbers::pi;

double distance(const CVector& a, const CVector& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::norm(a[k] - b[k]);
  return std::sqrt(s);
}
}  // namespace

std::size_t SampledWeightedSet::effective_size() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(q_values.begin(), q_values.end(), [](double q) { return q < HUGE_VAL; }));
}

void SampledWeightedSet::validate() const {
  if (points.empty()) throw Error(ErrorKind::EmptySample, "sample '" + label + "' has no points");
  if (q_values.size() != points.size())
    throw Error(ErrorKind::DimensionMismatch, "weight count differs from point count");
  const auto d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d || d == 0)
      throw Error(ErrorKind::DimensionMismatch, "sample points have inconsistent dimension");
    for (const auto& c : p)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw Error(ErrorKind::NonFiniteSample, "sample point is not finite");
  }
  for (double q : q_values)
    if (std::isnan(q) || q == -HUGE_VAL)
      throw Error(ErrorKind::PreconditionViolation, "weight values must be real or +inf");
  if (effective_size() == 0)
    throw Error(ErrorKind::EmptyEffectiveSample, "every weight value of '" + label + "' is +inf");
  if (!(mesh > 0.0)) throw Error(ErrorKind::PreconditionViolation, "mesh must be positive");
}

SampledWeightedSet make_sample(std::vector<CVector> points, std::vector<double> q_values,
                               double mesh, std::string label) {
  SampledWeightedSet s{std::move(points), std::move(q_values), mesh, std::move(label)};
  s.validate();
  return s;
}

SampledWeightedSet circle_sample(int count, double radius, Complex center) {
  if (count < 1 || !(radius > 0.0))
    throw Error(ErrorKind::PreconditionViolation, "circle needs count >= 1 and radius > 0");
  std::vector<CVector> pts;
  for (int k = 0; k < count; ++k)
    pts.push_back({center + std::polar(radius, 2.0 * kPi * k / count)});
  double mesh = 2.0 * radius * std::sin(kPi / (2.0 * count));
  return make_sample(std::move(pts), std::vector<double>(count, 0.0), mesh,
                     "circle(" + std::to_string(count) + ")");
}

SampledWeightedSet torus_sample(int count1, int count2, double r1, double r2) {
  if (count1 < 1 || count2 < 1 || !(r1 > 0.0) || !(r2 > 0.0))
    throw Error(ErrorKind::PreconditionViolation, "torus needs positive counts and radii");
  std::vector<CVector> pts;
  for (int a = 0; a < count1; ++a)
    for (int b = 0; b < count2; ++b)
      pts.push_back({std::polar(r1, 2.0 * kPi * a / count1), std::polar(r2, 2.0 * kPi * b / count2)});
  double m1 = 2.0 * r1 * std::sin(kPi / (2.0 * count1));
  double m2 = 2.0 * r2 * std::sin(kPi / (2.0 * count2));
  auto n = pts.size();
  return make_sample(std::move(pts), std::vector<double>(n, 0.0), std::hypot(m1, m2),
                     "torus(" + std::to_string(count1) + "x" + std::to_string(count2) + ")");
}

SampledWeightedSet interval_sample(int count, double lo, double hi) {
  if (count < 2 || !(hi > lo))
    throw Error(ErrorKind::PreconditionViolation, "interval needs count >= 2 and lo < hi");
  std::vector<double> xs(count);
  for (int k = 0; k < count; ++k) {
    double c = std::cos(kPi * k / (count - 1));
    xs[k] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
  }
  xs.front() = hi;
  xs.back() = lo;
  double mesh = 0.0;
  for (int k = 1; k < count; ++k) mesh = std::max(mesh, 0.5 * (xs[k - 1] - xs[k]));
  std::vector<CVector> pts;
  for (double x : xs) pts.push_back({Complex(x, 0.0)});
  return make_sample(std::move(pts), std::vector<double>(count, 0.0), mesh,
                     "interval(" + std::to_string(count) + ")");
}

SampledWeightedSet list_sample(std::vector<CVector> points, std::vector<double> q_values,
                               std::optional<double> mesh, std::string label) {
  double m = 1.0;
  if (mesh) {
    m = *mesh;
  } else if (points.size() > 1) {
    m = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < points.size(); ++j)
        if (i != j && points[i].size() == points[j].size())
          nearest = std::min(nearest, distance(points[i], points[j]));
      if (std::isfinite(nearest)) m = std::max(m, 0.5 * nearest);
    }
    if (!(m > 0.0)) m = 1.0;  // all points coincide
  }
  return make_sample(std::move(points), std::move(q_values), m, std::move(label));
}

SampledWeightedSet with_weights(const SampledWeightedSet& set, std::vector<double> q_values) {
  return make_sample(set.points, std::move(q_values), set.mesh, set.label);
}

}  // namespace plpot
