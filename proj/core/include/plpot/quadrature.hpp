#pragma once

#include <functional>
#include <vector>

#include "plpot/indicator.hpp"

namespace plpot {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
Rule1D gauss_legendre(int n, double a = 0.0, double b = 1.0);

/// Nodes and weights on the closed unit disk of C.
struct DiskRule {
  std::vector<Complex> nodes;
  std::vector<double> weights;
  double raw_total = 0.0;  // sum of weights before normalization
};

/// Polar product rule for  int_{|w|<1} rho(|w|) f(w) dA(w): Gauss-Legendre in
/// the radius, trapezoid in the angle. With `normalize` the weights are
/// rescaled to sum to one; raw_total keeps the unnormalized sum.
DiskRule polar_rule(int radial, int angular, const std::function<double(double)>& rho,
                    bool normalize = true);

}  // namespace plpot
