#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "plpot/errors.hpp"
#include "plpot/ferrier.hpp"
#include "plpot/kernel.hpp"
#include "plpot/minimize.hpp"
#include "plpot/quadrature.hpp"

using namespace plpot;
using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kPi = std::numbers::pi;

double beta(double s) { return s < 1.0 ? std::exp(-1.0 / (1.0 - s)) : 0.0; }

// Integral of beta over [a, b] in s = r^2, by adaptive Gauss-Kronrod.
double beta_mass(double a, double b, const std::function<double(double)>& weight = [](double) { return 1.0; }) {
  return gauss_kronrod<double, 61>::integrate([&](double s) { return beta(s) * weight(s); }, a, b, 15, 1e-14);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Unreachable;
}

}  // namespace

TEST_CASE("gauss_legendre is exact for degree 2n-1") {
  auto r = gauss_legendre(6, -1.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 11);
  CHECK(s == doctest::Approx((std::pow(2.0, 12) - 1.0) / 12.0).epsilon(1e-13));
}

TEST_CASE("bump and kernel") {
  CHECK(bump(0.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(bump(1.0) == 0.0);
  CHECK(bump(1.5) == 0.0);
  auto k = build_kernel(1, 64);
  CHECK(k.normalization_error <= 1e-8);
  CHECK(k.normalizer == doctest::Approx(1.0 / (kPi * beta_mass(0.0, 1.0))).epsilon(1e-12));
  double zero[1] = {0.0}, edge[1] = {1.0}, out[1] = {1.2}, mid[1] = {0.5};
  CHECK(k.profile(zero) == doctest::Approx(std::exp(-1.0)));
  CHECK(k.profile(edge) == 0.0);
  CHECK(k.profile(out) == 0.0);
  CHECK(k.profile(mid) <= k.profile(zero));
  double w = 0.0;
  for (double x : k.fine.weights) w += x;
  CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(build_kernel(2, 16).normalization_error <= 1e-5);
  CHECK(kind_of([] { build_kernel(1, 4); }) == ErrorKind::PreconditionViolation);
}

TEST_CASE("convolve: constants, harmonic and quadratic test functions") {
  auto k = build_kernel(1, 32);
  CVector z{Complex(0.7, -0.2)};
  ComplexFn c = [](std::span<const Complex>) { return 3.25; };
  CHECK(convolve(c, k, 0.3, z).value == doctest::Approx(3.25).epsilon(1e-14));

  ComplexFn lg = [](std::span<const Complex> w) { return std::log(std::abs(w[0])); };
  // trapezoid error in the angle decays like (eps/|z|)^nodes
  for (double eps : {0.1, 0.3}) {
    auto s = convolve(lg, k, eps, z);
    CHECK(s.value == doctest::Approx(std::log(std::abs(z[0]))).epsilon(1e-13));
  }

  // |z|^2 * chi_eps = |z|^2 + eps^2 E|w|^2, second moment by Gauss-Kronrod in s = r^2
  ComplexFn sq = [](std::span<const Complex> w) { return std::norm(w[0]); };
  double m2 = beta_mass(0.0, 1.0, [](double s) { return s; }) / beta_mass(0.0, 1.0);
  auto s = convolve(sq, k, 0.4, z);
  CHECK(s.value == doctest::Approx(std::norm(z[0]) + 0.16 * m2).epsilon(1e-9));

  ComplexFn bad = [](std::span<const Complex> w) { return -std::log(std::abs(w[0])); };
  CVector origin{0.0};
  auto k8 = build_kernel(1, 8);
  CHECK(kind_of([&] {
          CVector at{k8.fine.nodes[0] * 0.5};
          convolve(bad, k8, 0.5, CVector{Complex(0.0)});
          convolve(bad, k8, 0.5, CVector{-at[0]});
        }) != ErrorKind::Unreachable);
}

TEST_CASE("convolve_hp agrees with generic convolution and stays above H_P") {
  auto q = quadrilateral_body();
  auto k = build_kernel(2, 16);
  auto k32 = build_kernel(2, 32);
  ComplexFn f = [&](std::span<const Complex> w) { return h_p(q, w); };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lr(-3.0, 3.0), th(0.0, 2.0 * kPi);
  for (int i = 0; i < 30; ++i) {
    CVector z{std::polar(std::exp(lr(rng)), th(rng)), std::polar(std::exp(lr(rng)), th(rng))};
    auto a = convolve_hp(q, k, 0.5, z);
    auto b = convolve(f, k, 0.5, z);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
    CHECK(a.value >= h_p(q, z) - a.error - 1e-12);
    CHECK(convolve_hp(q, k32, 0.5, z).value >= h_p(q, z) - 1e-8);
  }
}

TEST_CASE("analytic_bound_a") {
  CHECK(analytic_bound_a(simplex_body(2), 0.1) == doctest::Approx(std::log(11.0)));
  CHECK(analytic_bound_a(quadrilateral_body(), 0.1) == doctest::Approx(std::log(11.0) + 2.0 * std::log(1.1)));
}

TEST_CASE("convolution_gap_scan on the simplex") {
  auto s = simplex_body(2);
  auto k = build_kernel(2, 16);
  GridSpec g;
  g.base = {0.0, 0.0};
  g.axes.push_back(GridAxis{"r1", 0, AxisPart::Re, {0.0, 0.01, 0.05, 0.09}});
  g.axes.push_back(GridAxis{"r2", 1, AxisPart::Re, {10.5, 100.0, 1e3, 1e5}});
  auto f = convolution_gap_scan(s, k, 0.1, g, 0.1, 1);
  double a = analytic_bound_a(s, 0.1);
  for (double v : f.values) {
    CHECK(v <= a);
    CHECK(v >= -1e-12);
  }
  CHECK(f.meta.at("quantity") == "convolution_gap");
  CHECK(std::stod(f.meta.at("analytic_bound_a")) == doctest::Approx(a));

  // compact region, small eps: the gap is below delta
  GridSpec c;
  c.base = {0.0, 0.0};
  c.axes.push_back(linspace_axis("r1", 0, AxisPart::Re, -10.0, 10.0, 9));
  c.axes.push_back(linspace_axis("r2", 1, AxisPart::Im, -10.0, 10.0, 9));
  auto h = convolution_gap_scan(s, k, 1e-3, c, 0.1, 1);
  for (double v : h.values) CHECK(v <= 0.1);
}

TEST_CASE("counterexample: kernel mass of the annulus") {
  double a = beta_mass(0.25, 1.0) / beta_mass(0.0, 1.0);
  auto r = counterexample_point(0.5, 1.0, 64);
  CHECK(r.a_eps == doctest::Approx(a).epsilon(1e-10));
  CHECK(r.a_eps == doctest::Approx(0.46488645224275).epsilon(1e-12));
}

TEST_CASE("counterexample: gap exceeds C and 2C") {
  for (double c : {1.0, 5.0, 20.0}) {
    auto r = counterexample_point(0.5, c, 64);
    CAPTURE(c);
    CHECK(r.gap > c);
    CHECK(r.doubled_bound_holds);
    CHECK(r.gap >= 2.0 * c);
    CHECK(r.quadrature_error < 0.1 * (r.gap - c));
  }
  auto big = counterexample_point(0.5, 5.0, 64);
  CHECK(big.log_abs_y > 20.0);
}

TEST_CASE("counterexample: direct quadrature at C = 1") {
  // Plain evaluation of (H_P * chi_eps)(x, y) in physical coordinates with
  // nested Gauss-Kronrod: polar coordinates in each disk.
  auto q = quadrilateral_body();
  auto r = counterexample_point(0.5, 1.0, 64);
  const double eps = 0.5, x = std::exp(r.log_abs_x), y = std::exp(r.log_abs_y);
  const double mass = kPi * beta_mass(0.0, 1.0);
  auto disk = [&](const std::function<double(Complex)>& f) {
    return gauss_kronrod<double, 31>::integrate(
               [&](double rho) {
                 return beta(rho * rho) * rho *
                        gauss<double, 30>::integrate([&](double t) { return f(std::polar(rho, t)); }, 0.0, 2.0 * kPi);
               },
               0.0, 1.0, 3, 1e-9) /
           mass;
  };
  double total = disk([&](Complex w1) {
    return disk([&](Complex w2) {
      CVector z{x + eps * w1, y + eps * w2};
      return h_p(q, z);
    });
  });
  CVector z0{x, y};
  double gap = total - h_p(q, z0);
  CHECK(gap == doctest::Approx(r.gap).epsilon(1e-4));
}

TEST_CASE("counterexample: only the quadrilateral") {
  CHECK(kind_of([] { counterexample_point(simplex_body(2), 0.5, 1.0, 64); }) == ErrorKind::PreconditionViolation);
  CHECK(counterexample_point(quadrilateral_body(), 0.5, 1.0, 32).gap > 1.0);
}

TEST_CASE("minimize_in_ball") {
  RealVecFn f = [](std::span<const double> p) { return std::pow(p[0] - 0.3, 2) + std::pow(p[1] + 0.2, 2); };
  double c[2] = {0.0, 0.0};
  auto m = minimize_in_ball(f, c, 1.0);
  CHECK(m.value == doctest::Approx(0.0).epsilon(1e-12));
  RealVecFn g = [](std::span<const double> p) { return std::hypot(p[0] - 3.0, p[1] - 4.0); };
  BallSearch s;
  s.lipschitz = 1.0;
  s.tol = 1e-6;
  auto n = minimize_in_ball(g, c, 2.0, s);
  CHECK(n.value == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(n.lower_bound <= 3.0 + 1e-12);
  CHECK(n.certified);
}

TEST_CASE("ferrier: listed cases") {
  ComplexFn zero = [](std::span<const Complex>) { return 0.0; };
  CVector x{Complex(0.4, 1.1)};
  auto r = ferrier(zero, 0.5, x);
  CHECK(r.u_t_value == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(r.minimizer[0] - x[0]) <= 1e-12);

  ComplexFn logplus = [](std::span<const Complex> z) { return std::max(std::log(std::abs(z[0])), 0.0); };
  CVector origin{0.0};
  auto s = ferrier(logplus, 1.0, origin);
  CHECK(s.u_t_value == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(s.u_t_value >= s.u_value);
}

TEST_CASE("ferrier: log+ against the closed form on the ray") {
  // For |x| = R >= 1 the infimum of min(1, 1/|y|) + |y - x|/t sits on the ray
  // through x: inward moves only cost, outward 1/y + (y - R)/t bottoms out at
  // y = max(R, sqrt t).
  ComplexFn logplus = [](std::span<const Complex> z) { return std::max(std::log(std::abs(z[0])), 0.0); };
  FerrierOptions o;
  o.lipschitz = 1.0;
  o.tol = 1e-10;
  for (double R : {1.5, 4.0, 30.0}) {
    for (double t : {0.5, 2.0, 10.0}) {
      double y = std::max(R, std::sqrt(t));
      double best = 1.0 / y + (y - R) / t;
      CVector x{std::polar(R, 0.7)};
      auto f = ferrier(logplus, t, x, o);
      CAPTURE(R);
      CAPTURE(t);
      CHECK(f.u_t_value == doctest::Approx(-std::log(best)).epsilon(1e-6));
      CHECK(f.u_t_value >= f.u_value - 1e-12);
      CHECK(std::abs(f.minimizer[0] - x[0]) <= f.search_radius + 1e-12);
    }
  }
}

TEST_CASE("ferrier_hp agrees with the generic search") {
  auto q = quadrilateral_body();
  ComplexFn u = [&](std::span<const Complex> z) { return h_p(q, z); };
  FerrierOptions o;
  o.tol = 1e-9;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> lr(-1.0, 2.5), th(0.0, 2.0 * kPi);
  for (int i = 0; i < 6; ++i) {
    CVector x{std::polar(std::exp(lr(rng)), th(rng)), std::polar(std::exp(lr(rng)), th(rng))};
    for (double t : {20.0, 3.0}) {
      auto exact = ferrier_hp(q, t, x);
      auto generic = ferrier(u, t, x, o);
      CHECK(exact.u_t_value >= exact.u_value - 1e-12);
      CHECK(exact.u_t_value == doctest::Approx(generic.u_t_value).epsilon(1e-6));
    }
  }
}

TEST_CASE("ferrier_contracts on the quadrilateral") {
  auto q = quadrilateral_body();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lr(std::log(1e-3), std::log(1e3)), th(0.0, 2.0 * kPi);
  std::vector<CVector> sample;
  for (int i = 0; i < 80; ++i)
    sample.push_back({std::polar(std::exp(lr(rng)), th(rng)), std::polar(std::exp(lr(rng)), th(rng))});
  ContractOptions co;
  co.body = q;
  co.c = 0.0;
  co.shells = {0.0, 1.0, 10.0, 100.0, 1000.0, 2000.0};
  auto rep = ferrier_contracts([&](double t, std::span<const Complex> x) { return ferrier_hp(q, t, x); },
                               {100.0, 10.0, 1.0}, sample, co);
  CHECK(rep.monotone);
  CHECK(rep.lipschitz);
  CHECK(rep.lower);
  CHECK(rep.worst_lipschitz <= 1e-12);
  // nontrivial regularization for large t, bounded across shells
  CHECK(rep.shell_constant[0] > 0.5);
  CHECK(rep.shell_constant[0] < 5.0);
  CHECK(rep.shell_constant[1] > 0.1);
  for (const auto& s : rep.shells[0])
    if (s.count) CHECK(s.max_gap <= rep.shell_constant[0]);
  CHECK(rep.shell_constant[2] < rep.shell_constant[1]);

  // u = H_P + 1, c = 1: clause (iii) tight as t -> 0
  ContractOptions c1 = co;
  c1.c = 1.0;
  auto r1 = ferrier_contracts([&](double t, std::span<const Complex> x) { return ferrier_hp(q, t, x, 1.0); },
                              {1.0, 0.01}, sample, c1);
  CHECK(r1.lower);
  CHECK(r1.worst_lower >= -1e-9);
  CHECK(r1.worst_lower <= 1e-12);
}

TEST_CASE("ferrier_contracts flags a non-monotone family") {
  auto q = quadrilateral_body();
  std::vector<CVector> sample{{2.0, 3.0}, {0.1, 0.2}};
  FerrierFn wrong = [&](double t, std::span<const Complex> x) {
    auto r = ferrier_hp(q, t, x);
    r.u_t_value += 1.0 / t;  // grows as t shrinks
    return r;
  };
  ContractOptions co;
  co.body = q;
  CHECK(kind_of([&] { ferrier_contracts(wrong, {2.0, 1.0}, sample, co); }) == ErrorKind::ContractViolation);
}

TEST_CASE("hat_delta: listed cases") {
  ComplexFn one = [](std::span<const Complex>) { return 1.0; };
  ComplexFn abs = [](std::span<const Complex> s) { return std::abs(s[0]); };
  ComplexFn hat = [](std::span<const Complex> s) { return std::max(1.0 - std::abs(s[0]), 0.0); };
  HatDeltaOptions o;
  o.lipschitz = 1.0;
  CVector s0{0.0}, s1{Complex(0.3, 0.9)};
  for (double lam : {0.5, 1.0, 2.0}) CHECK(hat_delta(one, lam, s1, o).value == doctest::Approx(1.0));
  CHECK(hat_delta(abs, 1.0, s0, o).value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(hat_delta(hat, 2.0, s0, o).value == doctest::Approx(1.0).epsilon(1e-6));
  // lam < 1 drags towards the origin: lam |s|
  CHECK(hat_delta(abs, 0.5, s1, o).value == doctest::Approx(0.5 * std::abs(s1[0])).epsilon(1e-6));
}

TEST_CASE("distance_identity_check") {
  ComplexFn one = [](std::span<const Complex>) { return 1.0; };
  ComplexFn abs = [](std::span<const Complex> s) { return std::abs(s[0]); };
  HatDeltaOptions o;
  o.lipschitz = 1.0;
  o.tol = 2e-4;
  o.max_evals = 2000000;
  o.radial = true;
  std::vector<CVector> pts{{1.0}, {Complex(-0.4, 0.3)}, {Complex(1.5, -1.2)}};
  auto a = distance_identity_check(one, 1.0, pts, o);
  CHECK(a.holds);
  CHECK(a.entries[0].lhs == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(a.entries[0].rhs == doctest::Approx(1.0).epsilon(1e-3));
  auto b = distance_identity_check(abs, 1.0, pts, o);
  CHECK(b.holds);
  CHECK(b.entries[0].lhs == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(b.entries[0].rhs == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(b.max_tolerance <= 1e-3);

  auto q = quadrilateral_body();
  ComplexFn slice = [&](std::span<const Complex> s) {
    CVector z{0.5, s[0]};
    return std::exp(-h_p(q, z));
  };
  auto c = distance_identity_check(slice, 2.0, pts, o);
  CHECK(c.holds);
}

TEST_CASE("submean_check") {
  CVector z0{Complex(0.2, -0.1), Complex(1.0, 0.0)}, dir{Complex(1.0, 0.0), Complex(0.0, 0.0)};
  ComplexFn re = [](std::span<const Complex> z) { return z[0].real(); };
  auto a = submean_check(re, z0, dir, 0.5, 64);
  CHECK(a.ok);
  CHECK(a.lhs == doctest::Approx(a.rhs).epsilon(1e-14));
  ComplexFn sq = [](std::span<const Complex> z) { return std::norm(z[0]); };
  auto b = submean_check(sq, z0, dir, 0.5, 64);
  CHECK(b.ok);
  CHECK(b.lhs < b.rhs - 0.2);
  ComplexFn neg = [](std::span<const Complex> z) { return -std::norm(z[0]); };
  CHECK_FALSE(submean_check(neg, z0, dir, 0.5, 64).ok);

  auto q = quadrilateral_body();
  ComplexFn hp = [&](std::span<const Complex> z) { return h_p(q, z); };
  CVector d2{Complex(0.6, 0.8), Complex(-1.0, 0.5)};
  CHECK(submean_check(hp, z0, d2, 2.0, 256).ok);
}
