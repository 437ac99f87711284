#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace plpot {

using RealVecFn = std::function<double(std::span<const double>)>;

struct BallSearch {
  int grid = 9;            // lattice points per axis for the multistart grid
  double lipschitz = 0.0;  // of the objective; 0 = unknown (no certificate)
  double tol = 1e-10;      // absolute target for upper - lower
  std::size_t max_evals = 400000;
};

struct BallMinimum {
  std::vector<double> argmin;
  double value = 0.0;        // best value found (an upper bound on the infimum)
  double lower_bound = 0.0;  // certified when lipschitz > 0, else value - error
  double error = 0.0;        // value - lower_bound
  bool certified = false;
  std::size_t evaluations = 0;
};

/// Minimizes f over the closed Euclidean ball B(center, radius) in R^m.
///
/// With a Lipschitz constant: branch and bound on cubes, each bounded below by
/// f(p) - 2 L h at the projection p of its centre onto the ball (h = half
/// diagonal). Always: compass search polished from the centre and from the
/// 3^m lattice starts {-r/2, 0, r/2}^m, plus a grid of `grid`^m points when
/// that is affordable.
BallMinimum minimize_in_ball(const RealVecFn& f, std::span<const double> center, double radius,
                             const BallSearch& search = {});

}  // namespace plpot
