#include "plpot/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "plpot/errors.hpp"

namespace plpot {

Rule1D gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolation, "Gauss-Legendre needs n >= 1");
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = 0.5 * (a + b) + 0.5 * (b - a) * r.nodes[i];
    r.weights[i] *= 0.5 * (b - a);
  }
  return r;
}

DiskRule polar_rule(int radial, int angular, const std::function<double(double)>& rho,
                    bool normalize) {
  if (radial < 1 || angular < 1)
    throw Error(ErrorKind::PreconditionViolation, "polar rule needs positive node counts");
  auto gl = gauss_legendre(radial, 0.0, 1.0);
  DiskRule d;
  const double dtheta = 2.0 * std::numbers::pi / angular;
  for (int i = 0; i < radial; ++i) {
    double r = gl.nodes[i];
    double w = gl.weights[i] * r * rho(r) * dtheta;
    for (int j = 0; j < angular; ++j) {
      // half-step offset keeps nodes off the real axis
      d.nodes.push_back(std::polar(r, dtheta * (j + 0.5)));
      d.weights.push_back(w);
      d.raw_total += w;
    }
  }
  if (normalize && d.raw_total > 0.0)
    for (auto& w : d.weights) w /= d.raw_total;
  return d;
}

}  // namespace plpot
