#include "plpot/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>

#include <boost/math/special_functions/expint.hpp>

#include "parallel.hpp"
#include "plpot/errors.hpp"

namespace plpot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_{|w|<1} beta(|w|^2) dA = pi int_0^1 beta(s) ds = pi E_2(1)
double disk_mass() { return std::numbers::pi * boost::math::expint(2, 1.0); }

// Neumaier summation; the convolution sums run over millions of nodes.
struct Accumulator {
  double sum = 0.0, c = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      c += (sum - t) + v;
    else
      c += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

// Sum of prod_k w_k(i_k) f(z + eps * (nodes_k(i_k)))_k over all node tuples.
double product_sum(const ComplexFn& f, const DiskRule& rule, double eps,
                   std::span<const Complex> z) {
  const std::size_t d = z.size(), m = rule.nodes.size();
  CVector p(z.begin(), z.end());
  std::vector<std::size_t> idx(d, 0);
  Accumulator acc;
  while (true) {
    double w = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      p[k] = z[k] + eps * rule.nodes[idx[k]];
      w *= rule.weights[idx[k]];
    }
    double v = f(p);
    if (!std::isfinite(v))
      throw Error(ErrorKind::NonFiniteSample, "integrand is not finite at a quadrature node");
    acc.add(w * v);
    std::size_t k = 0;
    while (k < d && ++idx[k] == m) idx[k++] = 0;
    if (k == d) break;
  }
  return acc.value();
}

double hp_sum(const ConvexBody& body, const DiskRule& rule, double eps,
              std::span<const Complex> z) {
  const std::size_t d = z.size(), m = rule.nodes.size();
  const auto& verts = body.vertices_double();
  std::vector<std::vector<double>> logs(d, std::vector<double>(m));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < m; ++i) logs[k][i] = std::log(std::abs(z[k] + eps * rule.nodes[i]));

  auto term = [](double v, double l) { return v == 0.0 ? 0.0 : v * l; };
  Accumulator acc;
  if (d == 2) {
    std::vector<double> first(verts.size());
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t v = 0; v < verts.size(); ++v) first[v] = term(verts[v][0], logs[0][i]);
      Accumulator row;
      for (std::size_t j = 0; j < m; ++j) {
        double best = -kInf;
        for (std::size_t v = 0; v < verts.size(); ++v)
          best = std::max(best, first[v] + term(verts[v][1], logs[1][j]));
        if (!std::isfinite(best))
          throw Error(ErrorKind::NonFiniteSample, "H_P is not finite at a quadrature node");
        row.add(rule.weights[j] * best);
      }
      acc.add(rule.weights[i] * row.value());
    }
    return acc.value();
  }
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    double w = 1.0;
    for (std::size_t k = 0; k < d; ++k) w *= rule.weights[idx[k]];
    double best = -kInf;
    for (const auto& v : verts) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += term(v[k], logs[k][idx[k]]);
      best = std::max(best, s);
    }
    if (!std::isfinite(best))
      throw Error(ErrorKind::NonFiniteSample, "H_P is not finite at a quadrature node");
    acc.add(w * best);
    std::size_t k = 0;
    while (k < d && ++idx[k] == m) idx[k++] = 0;
    if (k == d) break;
  }
  return acc.value();
}

void check_convolve_args(const Kernel& kernel, double eps, std::size_t dim) {
  if (dim != static_cast<std::size_t>(kernel.d))
    throw Error(ErrorKind::DimensionMismatch, "point and kernel dimensions differ");
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw Error(ErrorKind::PreconditionViolation, "eps must be positive");
}

}  // namespace

double bump(double s) { return s < 1.0 ? std::exp(-1.0 / (1.0 - s)) : 0.0; }

double Kernel::profile(std::span<const double> moduli) const {
  double p = 1.0;
  for (double r : moduli) p *= bump(r * r);
  return p;
}

Kernel build_kernel(int d, int nodes_per_dim) {
  if (d < 1) throw Error(ErrorKind::PreconditionViolation, "kernel dimension must be >= 1");
  if (nodes_per_dim < 8) throw Error(ErrorKind::PreconditionViolation, "nodes_per_dim must be >= 8");
  Kernel k;
  k.d = d;
  k.nodes_per_dim = nodes_per_dim;
  k.id = "bump-product(exp(-1/(1-|z_k|^2)))";
  const double mass = disk_mass();
  k.normalizer = std::pow(mass, -d);
  auto rho = [](double r) { return bump(r * r); };
  k.fine = polar_rule(nodes_per_dim, nodes_per_dim, rho);
  k.coarse = polar_rule(nodes_per_dim / 2, nodes_per_dim / 2, rho);
  k.normalization_error = std::abs(std::pow(k.fine.raw_total / mass, d) - 1.0);
  return k;
}

Smoothed convolve(const ComplexFn& f, const Kernel& kernel, double eps, std::span<const Complex> z) {
  check_convolve_args(kernel, eps, z.size());
  double fine = product_sum(f, kernel.fine, eps, z);
  double coarse = product_sum(f, kernel.coarse, eps, z);
  return {fine, std::abs(fine - coarse)};
}

Smoothed convolve_hp(const ConvexBody& body, const Kernel& kernel, double eps,
                     std::span<const Complex> z) {
  check_convolve_args(kernel, eps, z.size());
  if (body.dim() != kernel.d)
    throw Error(ErrorKind::DimensionMismatch, "body and kernel dimensions differ");
  double fine = hp_sum(body, kernel.fine, eps, z);
  double coarse = hp_sum(body, kernel.coarse, eps, z);
  return {fine, std::abs(fine - coarse)};
}

double analytic_bound_a(const ConvexBody& body, double delta) {
  if (body.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "A(delta) is defined for d = 2");
  if (!(delta > 0.0)) throw Error(ErrorKind::PreconditionViolation, "delta must be positive");
  const double a1 = std::log1p(1.0 / delta), a2 = std::log1p(delta);
  double best = -kInf;
  for (const auto& v : body.vertices_double()) best = std::max(best, v[0] * a1 + v[1] * a2);
  return best;
}

GridField convolution_gap_scan(const ConvexBody& body, const Kernel& kernel, double eps,
                               const GridSpec& region, double delta, unsigned threads) {
  if (body.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "gap scan is defined for d = 2");
  if (region.base.size() != 2)
    throw Error(ErrorKind::DimensionMismatch, "region must live in C^2");
  const double bound = analytic_bound_a(body, delta);
  GridField out;
  out.spec = region;
  out.values.resize(region.size());
  std::vector<double> errors(region.size());
  detail::parallel_for(
      region.size(),
      [&](std::size_t i) {
        CVector z = region.point(i);
        auto s = convolve_hp(body, kernel, eps, z);
        out.values[i] = s.value - h_p(body, z);
        errors[i] = s.error;
      },
      threads);
  double max_gap = -kInf, min_gap = kInf, max_err = 0.0;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    max_gap = std::max(max_gap, out.values[i]);
    min_gap = std::min(min_gap, out.values[i]);
    max_err = std::max(max_err, errors[i]);
  }
  out.meta = {{"quantity", "convolution_gap"},
              {"body", body.tag()},
              {"eps", format_double(eps)},
              {"delta", format_double(delta)},
              {"analytic_bound_a", format_double(bound)},
              {"kernel", kernel.id},
              {"kernel_nodes", std::to_string(kernel.nodes_per_dim)},
              {"max_gap", format_double(max_gap)},
              {"min_gap", format_double(min_gap)},
              {"max_quadrature_error", format_double(max_err)}};
  return out;
}

ConvexBody quadrilateral_body() { return build_body(std::vector<std::vector<long long>>{{0, 0}, {1, 0}, {0, 1}, {1, 2}}); }

CounterexampleReport counterexample_point(const ConvexBody& body, double eps, double c,
                                          int quad_nodes) {
  auto key = [](const ConvexBody& b) {
    std::set<std::vector<std::string>> s;
    for (const auto& v : b.vertices()) {
      std::vector<std::string> row;
      for (const auto& q : v) row.push_back(to_string(q));
      s.insert(row);
    }
    return s;
  };
  if (body.dim() != 2 || key(body) != key(quadrilateral_body()))
    throw Error(ErrorKind::PreconditionViolation,
                "the counterexample is stated for hull{(0,0),(1,0),(0,1),(1,2)}, got " + body.tag());
  return counterexample_point(eps, c, quad_nodes);
}

CounterexampleReport counterexample_point(double eps, double c, int quad_nodes) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::PreconditionViolation, "eps must lie in (0, 1)");
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::PreconditionViolation, "C must be positive");
  if (quad_nodes < 8) throw Error(ErrorKind::PreconditionViolation, "quad_nodes must be >= 8");

  CounterexampleReport rep;
  rep.eps = eps;
  rep.c = c;
  rep.quad_nodes = quad_nodes;

  // mass of {1/2 <= |w_1| <= 1}: int_{1/2}^1 beta(r^2) r dr / (E_2(1)/2)
  auto gl = gauss_legendre(quad_nodes, 0.5, 1.0);
  double num = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i)
    num += gl.weights[i] * bump(gl.nodes[i] * gl.nodes[i]) * gl.nodes[i];
  rep.a_eps = num / (0.5 * boost::math::expint(2, 1.0));

  // |y| = 2 (max(4/eps, (2/eps) e^{2C/A}) + eps), |x| = min(eps/4, 1/|y|) / 2
  const double log_m = std::max(std::log(4.0 / eps), std::log(2.0 / eps) + 2.0 * c / rep.a_eps);
  const double big = log_m + std::log1p(eps * std::exp(-log_m)) + std::numbers::ln2;
  rep.log_abs_y = big;
  rep.log_abs_x = std::min(std::log(eps / 4.0), -big) - std::numbers::ln2;

  // Gap integrand at x + eps w_1, y + eps w_2 with x, y > 0, minus H_P = log|y|:
  //   max(-L, l_1 - L, d_2, l_1 + L + 2 d_2)
  // where l_1 = log|x + eps w_1| and d_2 = log|1 + eps w_2 / y|.
  auto gap_with = [&](const DiskRule& rule) {
    const std::size_t m = rule.nodes.size();
    std::vector<double> l1(m), d2(m);
    for (std::size_t i = 0; i < m; ++i) {
      double r = std::abs(rule.nodes[i]), th = std::arg(rule.nodes[i]);
      double rho = std::exp(rep.log_abs_x - std::log(eps * r));
      l1[i] = std::log(eps * r) + 0.5 * std::log1p(rho * rho + 2.0 * rho * std::cos(th));
      double rho2 = eps * r * std::exp(-big);
      d2[i] = 0.5 * std::log1p(rho2 * rho2 + 2.0 * rho2 * std::cos(th));
    }
    Accumulator acc;
    for (std::size_t i = 0; i < m; ++i) {
      Accumulator row;
      for (std::size_t j = 0; j < m; ++j) {
        double v = std::max(std::max(-big, l1[i] - big), std::max(d2[j], l1[i] + big + 2.0 * d2[j]));
        row.add(rule.weights[j] * v);
      }
      acc.add(rule.weights[i] * row.value());
    }
    return acc.value();
  };
  auto rho = [](double r) { return bump(r * r); };
  double fine = gap_with(polar_rule(quad_nodes, quad_nodes, rho));
  double coarse = gap_with(polar_rule(quad_nodes / 2, quad_nodes / 2, rho));
  rep.gap = fine;
  rep.quadrature_error = std::abs(fine - coarse);
  rep.doubled_bound_holds = rep.gap >= 2.0 * c;
  if (!(rep.quadrature_error < rep.gap - c))
    throw Error(ErrorKind::QuadratureTooCoarse,
                "quadrature error " + format_double(rep.quadrature_error) + " is not below gap - C = " +
                    format_double(rep.gap - c));
  return rep;
}

std::string to_json(const CounterexampleReport& r) {
  std::string s = "{\n";
  auto field = [&](const char* name, const std::string& v, bool last = false) {
    s += "  \"";
    s += name;
    s += "\": " + v + (last ? "\n" : ",\n");
  };
  field("eps", format_double(r.eps));
  field("C", format_double(r.c));
  field("a_eps", format_double(r.a_eps));
  field("x_C", "{\"log_modulus\": " + format_double(r.log_abs_x) + ", \"arg\": 0}");
  field("y_C", "{\"log_modulus\": " + format_double(r.log_abs_y) + ", \"arg\": 0}");
  field("gap", format_double(r.gap));
  field("quadrature_error", format_double(r.quadrature_error));
  field("doubled_bound_holds", r.doubled_bound_holds ? "true" : "false");
  field("quad_nodes", std::to_string(r.quad_nodes), true);
  return s + "}\n";
}

}  // namespace plpot
