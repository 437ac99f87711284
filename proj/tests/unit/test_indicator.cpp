#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "plpot/errors.hpp"
#include "plpot/indicator.hpp"
#include "plpot/kernel.hpp"

using namespace plpot;

namespace {

ConvexBody segment() { return build_body(std::vector<std::vector<long long>>{{0}, {1}}); }

double logp(double x) { return std::max(std::log(x), 0.0); }

}  // namespace

TEST_CASE("h_p: explicit formulas") {
  auto q = quadrilateral_body();
  CVector z{2.0, 3.0};
  CHECK(h_p(q, z) == doctest::Approx(std::log(18.0)).epsilon(1e-15));
  CVector small{Complex(0.3, 0.4), Complex(0.0, -1.0)};
  CHECK(h_p(q, small) == 0.0);
  CVector e{std::exp(1.0), std::exp(2.0)};
  CHECK(h_p(simplex_body(2), e) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("h_p: random points against the four-term maximum") {
  auto q = quadrilateral_body();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lr(-8.0, 8.0), th(0.0, 6.283185307179586);
  for (int i = 0; i < 500; ++i) {
    double a = lr(rng), b = lr(rng);
    CVector z{std::polar(std::exp(a), th(rng)), std::polar(std::exp(b), th(rng))};
    double expect = std::max({0.0, a, b, a + 2.0 * b});
    CHECK(h_p(q, z) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("h_p: zeros and log-domain points") {
  auto q = quadrilateral_body();
  CVector z{0.0, 5.0};
  CHECK(h_p(q, z) == doctest::Approx(std::log(5.0)));
  double logs[2] = {-2000.0, 1500.0};
  CHECK(h_p(q, LogPoint::from_logs(logs)) == doctest::Approx(1500.0));
  CVector origin{0.0, 0.0};
  CHECK(h_p(q, origin) == 0.0);
}

TEST_CASE("check_lower_bound") {
  double m1[2] = {5.0, 1.0};
  auto r = check_lower_bound(simplex_body(2), LogPoint::from_moduli(m1), 1);
  CHECK(r.ok);
  CHECK(r.lhs == doctest::Approx(std::log(5.0)));
  CHECK(r.rhs == doctest::Approx(std::log(5.0)));

  double m2[2] = {0.1, 100.0};
  auto s = check_lower_bound(quadrilateral_body(), LogPoint::from_moduli(m2), 1);
  CHECK(s.ok);
  // the vertex (1,2) term is log(0.1 * 100^2)
  CHECK(s.lhs == doctest::Approx(std::log(1000.0)));
  CHECK(s.rhs == doctest::Approx(std::log(100.0)));

  double m3[2] = {0.5, 0.9};
  auto t = check_lower_bound(quadrilateral_body(), LogPoint::from_moduli(m3), 1);
  CHECK(t.ok);
  CHECK(t.lhs == 0.0);
  CHECK(t.rhs == 0.0);
}

TEST_CASE("check_lower_bound: random sample, every body with sigma inside") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lr(-5.0, 5.0);
  for (const auto& body : {quadrilateral_body(), simplex_body(2)}) {
    for (int i = 0; i < 200; ++i) {
      double m[2] = {std::exp(lr(rng)), std::exp(lr(rng))};
      auto r = check_lower_bound(body, LogPoint::from_moduli(m), 1);
      CHECK(r.ok);
      CHECK(r.rhs == doctest::Approx(std::max(logp(m[0]), logp(m[1]))));
    }
  }
}

TEST_CASE("level_set_distance: segment circles") {
  for (double R : {2.0, 10.0, 1000.0}) {
    double m[1] = {R};
    auto d = level_set_distance(segment(), LogPoint::from_moduli(m), 0.5);
    CHECK(d.estimate == doctest::Approx(R).epsilon(1e-12));
  }
}

TEST_CASE("level_set_distance: simplex grows linearly") {
  // Level sets of max(log r1, log r2): distance from max = R to max = e R.
  for (double R : {10.0, 100.0, 1000.0}) {
    double m[2] = {R, R};
    auto d = level_set_distance(simplex_body(2), LogPoint::from_moduli(m), std::exp(-1.0));
    CHECK(d.estimate == doctest::Approx(R * (std::exp(1.0) - 1.0)).epsilon(1e-9));
  }
}

TEST_CASE("level_set_distance: quadrilateral shrinks like 1/R^2") {
  // Near (1/R^2, R^2) on L_x the gradient of r1 r2^2 is (R^4, 2), so the
  // first-order distance to r1 r2^2 = 2 R^2 is about 1/R^2.
  double prev = std::numeric_limits<double>::infinity();
  for (double R : {10.0, 100.0, 1000.0}) {
    double m[2] = {1.0, R};
    auto d = level_set_distance(quadrilateral_body(), LogPoint::from_moduli(m), 0.5);
    CHECK(d.estimate < prev);
    CHECK(d.estimate * R * R >= 0.9);
    CHECK(d.estimate * R * R <= 1.5);
    prev = d.estimate;
  }
}

TEST_CASE("level_set_distance: unbounded below level zero") {
  double m[2] = {0.5, 0.5};
  CHECK_THROWS_AS(level_set_distance(quadrilateral_body(), LogPoint::from_moduli(m), 0.5), Error);
}

TEST_CASE("distance_to_monomial_superlevel") {
  double p[2] = {1.0, 1.0}, v[2] = {1.0, 0.0};
  CHECK(distance_to_monomial_superlevel(p, v, std::log(3.0)) == doctest::Approx(2.0));
  CHECK(distance_to_monomial_superlevel(p, v, -1.0) == 0.0);
}
