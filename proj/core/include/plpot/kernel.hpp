#pragma once

#include <functional>
#include <span>
#include <string>

#include "plpot/convex_body.hpp"
#include "plpot/grid_field.hpp"
#include "plpot/indicator.hpp"
#include "plpot/quadrature.hpp"

namespace plpot {

using ComplexFn = std::function<double(std::span<const Complex>)>;

/// beta(s) = exp(-1/(1-s)) for s < 1, else 0.
double bump(double s);

/// Product smoothing kernel chi(z) = c * prod_k beta(|z_k|^2) on the unit
/// polydisk, with c chosen so that the integral over C^d is one.
struct Kernel {
  int d = 1;
  int nodes_per_dim = 0;
  std::string id;
  double support_radius = 1.0;
  double normalizer = 0.0;  // c, from the closed form (pi E_2(1))^{-d}
  DiskRule fine;            // per complex coordinate, weights sum to one
  DiskRule coarse;          // half the nodes, for the error estimate
  double normalization_error = 0.0;  // |quadrature integral of chi - 1|

  /// prod_k beta(r_k^2), unscaled.
  double profile(std::span<const double> moduli) const;
  /// chi at a point given by its moduli.
  double value(std::span<const double> moduli) const { return normalizer * profile(moduli); }
};

/// Requires nodes_per_dim >= 8.
Kernel build_kernel(int d, int nodes_per_dim);

struct Smoothed {
  double value = 0.0;
  double error = 0.0;  // |fine - coarse|
};

/// (f * chi_eps)(z) by the kernel's product rule. Throws NonFiniteSample when
/// f is not finite at a node.
Smoothed convolve(const ComplexFn& f, const Kernel& kernel, double eps, std::span<const Complex> z);

/// Same for f = H_P, evaluated separably in log-moduli.
Smoothed convolve_hp(const ConvexBody& body, const Kernel& kernel, double eps,
                     std::span<const Complex> z);

/// sup over J in P of j_1 log(1 + 1/delta) + j_2 log(1 + delta); d = 2 only.
double analytic_bound_a(const ConvexBody& body, double delta);

/// Field of (H_P * chi_eps) - H_P over the grid; d = 2. Meta carries the
/// analytic bound for `delta`, the kernel id, the largest gap and the largest
/// quadrature error.
GridField convolution_gap_scan(const ConvexBody& body, const Kernel& kernel, double eps,
                               const GridSpec& region, double delta, unsigned threads = 0);

/// hull{(0,0),(1,0),(0,1),(1,2)}
ConvexBody quadrilateral_body();

struct CounterexampleReport {
  double eps = 0.0;
  double c = 0.0;
  double a_eps = 0.0;       // kernel mass of {eps/2 <= |z_1| <= eps}
  double log_abs_x = 0.0;   // x_C is real positive with this log-modulus
  double log_abs_y = 0.0;   // same for y_C
  double gap = 0.0;
  double quadrature_error = 0.0;
  bool doubled_bound_holds = false;  // gap >= 2C
  int quad_nodes = 0;
};

/// Gap (H_P * chi_eps) - H_P at the point the quadrilateral example
/// constructs, computed in log-moduli so astronomically large |y_C| is fine.
/// Throws QuadratureTooCoarse when the error estimate is not below gap - C.
CounterexampleReport counterexample_point(double eps, double c, int quad_nodes);
/// Checks that `body` is the quadrilateral first (PreconditionViolation).
CounterexampleReport counterexample_point(const ConvexBody& body, double eps, double c,
                                          int quad_nodes);

/// {"eps", "C", "a_eps", "x_C", "y_C", "gap", "quadrature_error", ...} with
/// 17 significant digits; x_C and y_C as log-moduli.
std::string to_json(const CounterexampleReport& report);

}  // namespace plpot
