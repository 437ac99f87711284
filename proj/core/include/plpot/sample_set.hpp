#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plpot/indicator.hpp"

namespace plpot {

/// Finite sample of a compact K with weight values Q = -log w.
/// q = +inf marks w = 0: such points impose no constraint.
struct SampledWeightedSet {
  std::vector<CVector> points;
  std::vector<double> q_values;
  double mesh = 0.0;  // covering radius of the sample inside K
  std::string label;

  std::size_t size() const noexcept { return points.size(); }
  std::size_t dim() const noexcept { return points.empty() ? 0 : points.front().size(); }
  std::size_t effective_size() const noexcept;

  /// Throws EmptySample, EmptyEffectiveSample, DimensionMismatch or PreconditionViolation.
  void validate() const;
};

SampledWeightedSet make_sample(std::vector<CVector> points, std::vector<double> q_values,
                               double mesh, std::string label);

/// N equiangular points on |z - center| = radius; mesh is the chord 2r sin(pi/2N).
SampledWeightedSet circle_sample(int count, double radius = 1.0, Complex center = {});

/// Product of two equiangular circles in C^2.
SampledWeightedSet torus_sample(int count1, int count2, double r1 = 1.0, double r2 = 1.0);

/// Chebyshev-Lobatto points cos(k pi/(N-1)) mapped to [lo, hi].
SampledWeightedSet interval_sample(int count, double lo = -1.0, double hi = 1.0);

/// Explicit points. Without a mesh, half the largest nearest-neighbour distance is used.
SampledWeightedSet list_sample(std::vector<CVector> points, std::vector<double> q_values,
                               std::optional<double> mesh = std::nullopt,
                               std::string label = "list");

/// Same points with the weight replaced.
SampledWeightedSet with_weights(const SampledWeightedSet& set, std::vector<double> q_values);

}  // namespace plpot
