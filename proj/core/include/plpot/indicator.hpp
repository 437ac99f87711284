#pragma once

#include <complex>
#include <span>
#include <vector>

#include "plpot/convex_body.hpp"

namespace plpot {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Moduli of a point of C^d together with their logarithms. Built from the
/// logs directly when the moduli themselves would overflow a double.
struct LogPoint {
  std::vector<double> moduli;
  std::vector<double> logs;  // -inf exactly where the modulus vanishes

  static LogPoint from_complex(std::span<const Complex> z);
  static LogPoint from_moduli(std::span<const double> moduli);
  static LogPoint from_logs(std::span<const double> logs);

  std::size_t dim() const noexcept { return logs.size(); }
};

/// H_P(z) = max over vertices V of sum_k V_k log|z_k|, with 0 * (-inf) = 0.
/// Vertices that put a positive exponent on a vanishing coordinate drop out.
double h_p(const ConvexBody& body, const LogPoint& z);
double h_p(const ConvexBody& body, std::span<const Complex> z);

struct LowerBoundCheck {
  double lhs = 0.0;  // H_P(z)
  double rhs = 0.0;  // (1/k) max_j log+ |z_j|
  bool ok = false;
};

/// Compares H_P against (1/k) max_j log+|z_j|. Requires Sigma in kP.
LowerBoundCheck check_lower_bound(const ConvexBody& body, const LogPoint& z, int k);

struct LevelSetSearch {
  int rays = 256;           // uniformly spaced ray directions (d = 2) or simplex grid steps
  int axis_refinement = 48; // extra rays geometrically clustered at each axis (d = 2)
};

struct LevelSetDistance {
  double estimate = 0.0;    // min over the discretized level set of the distance
  double resolution = 0.0;  // largest gap between neighbouring discretization points
  std::vector<double> closest_point;  // moduli of the minimizing point on L_x
};

/// Euclidean distance, in moduli space, from the level set {H_P = H_P(x)} to
/// the superlevel set {H_P >= H_P(x) - log C}. Throws UnboundedLevelSet when
/// H_P(x) <= 0.
LevelSetDistance level_set_distance(const ConvexBody& body, const LogPoint& x, double c,
                                    const LevelSetSearch& search = {});

/// Distance from the moduli point p to {rho : sum_k v_k log rho_k >= level}.
double distance_to_monomial_superlevel(std::span<const double> p, std::span<const double> v,
                                       double level);

}  // namespace plpot
