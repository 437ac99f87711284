#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "plpot/errors.hpp"
#include "plpot/extremal.hpp"
#include "plpot/kernel.hpp"
#include "plpot/socp.hpp"

using namespace plpot;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ConvexBody segment() { return build_body(std::vector<std::vector<long long>>{{0}, {1}}); }

// T_n(x) by the three-term recurrence.
double chebyshev_t(int n, double x) {
  double a = 1.0, b = x;
  if (n == 0) return a;
  for (int k = 1; k < n; ++k) {
    double c = 2.0 * x * b - a;
    a = b;
    b = c;
  }
  return b;
}

Complex coeff_of(const Polynomial& p, const MultiIndex& j) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.support[i] == j) return p.coeffs[i];
  return 0.0;
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

TEST_CASE("eval_poly") {
  auto q = quadrilateral_body();
  auto p = make_polynomial(q, 1, {{MultiIndex{1, 2}, 1.0}});
  CVector z{2.0, 3.0};
  CHECK(eval_poly(p, z) == Complex(18.0));
  auto one = make_polynomial(q, 1, {{MultiIndex{0, 0}, 1.0}});
  CVector w{Complex(0.3, -7.0), Complex(1e5, 2.0)};
  CHECK(eval_poly(one, w) == Complex(1.0));
  auto s = make_polynomial(simplex_body(2), 1, {{MultiIndex{1, 0}, 1.0}, {MultiIndex{0, 1}, Complex(0.0, 1.0)}});
  CVector ones{1.0, 1.0};
  CHECK(eval_poly(s, ones) == Complex(1.0, 1.0));
}

TEST_CASE("make_polynomial merges, drops zeros, rejects support outside nP") {
  auto s = simplex_body(2);
  auto p = make_polynomial(s, 2, {{MultiIndex{1, 0}, 1.0}, {MultiIndex{1, 0}, -1.0}, {MultiIndex{0, 2}, 2.0}});
  CHECK(p.size() == 1);
  CHECK(p.support.front() == MultiIndex{0, 2});
  CHECK_THROWS_AS(make_polynomial(s, 1, {{MultiIndex{1, 1}, 1.0}}), Error);
}

TEST_CASE("weighted_sup_norm") {
  auto seg = segment();
  auto one = make_polynomial(seg, 1, {{MultiIndex{0}, 1.0}});
  auto circle = circle_sample(256);
  CHECK(weighted_sup_norm(one, circle, 1) == doctest::Approx(1.0));
  auto z = make_polynomial(seg, 1, {{MultiIndex{1}, 1.0}});
  CHECK(weighted_sup_norm(z, circle, 1) == doctest::Approx(1.0).epsilon(1e-15));
  auto two = list_sample({{Complex(2.0)}}, {std::log(2.0)}, 1.0);
  CHECK(weighted_sup_norm(z, two, 1) == doctest::Approx(1.0).epsilon(1e-15));
  auto with_inf = list_sample({{Complex(2.0)}, {Complex(0.5)}}, {kInf, 0.0});
  CHECK(weighted_sup_norm(z, with_inf, 1) == doctest::Approx(0.5));
}

TEST_CASE("sample sets") {
  auto c = circle_sample(512);
  CHECK(c.size() == 512);
  CHECK(c.mesh == doctest::Approx(2.0 * std::sin(std::acos(-1.0) / 1024.0)).epsilon(1e-15));
  CHECK(std::abs(c.mesh - std::acos(-1.0) / 512.0) < 1e-8);
  auto i = interval_sample(257);
  CHECK(i.size() == 257);
  CHECK(i.points.front()[0].real() == doctest::Approx(1.0));
  CHECK(i.points.back()[0].real() == doctest::Approx(-1.0));
  CHECK(i.points[128][0].real() == doctest::Approx(0.0));
  auto t = torus_sample(4, 6);
  CHECK(t.size() == 24);
  CHECK(t.dim() == 2);
  CHECK(kind_of([] { list_sample({{Complex(1.0)}, {Complex(2.0)}}, {kInf, kInf}).validate(); }) ==
        ErrorKind::EmptyEffectiveSample);
  CHECK(kind_of([] { list_sample({}, {}).validate(); }) == ErrorKind::EmptySample);
  CHECK(kind_of([] { list_sample({{Complex(1.0)}, {Complex(2.0), Complex(0.0)}}, {0.0, 0.0}).validate(); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("socp: single disk") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd g(2);
  g << 3.0, 4.0;
  auto r = solve_unit_ball_socp(a, g);
  CHECK(r.converged);
  CHECK(r.lower <= r.upper);
  CHECK(r.lower == doctest::Approx(5.0).epsilon(1e-7));
  CHECK(r.upper == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("socp: box of disks") {
  // |x1| <= 1 and |x2| <= 1 as two degenerate blocks: optimum |g1| + |g2|.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 2);
  a(0, 0) = 1.0;
  a(2, 1) = 1.0;
  Eigen::VectorXd g(2);
  g << -2.0, 0.5;
  auto r = solve_unit_ball_socp(a, g);
  CHECK(r.lower == doctest::Approx(2.5).epsilon(1e-7));
  CHECK(r.upper == doctest::Approx(2.5).epsilon(1e-7));
  CHECK(std::abs(r.x(0)) <= 1.0 + 1e-12);
  CHECK(std::abs(r.x(1)) <= 1.0 + 1e-12);
}

TEST_CASE("phi_n: disk, z^4 is extremal at 2") {
  auto k = circle_sample(512);
  CVector z0{2.0};
  ExtremalOptions o;
  o.tol = 1e-10;
  auto e = phi_n(segment(), k, 4, z0, o);
  CHECK(e.phi_value <= e.phi_upper);
  CHECK(e.phi_value == doctest::Approx(16.0).epsilon(1e-8));
  Complex lead = coeff_of(e.witness, MultiIndex{4});
  CHECK(std::abs(lead) == doctest::Approx(1.0).epsilon(1e-6));
  for (std::size_t i = 0; i < e.witness.size(); ++i)
    if (e.witness.support[i] != MultiIndex{4}) CHECK(std::abs(e.witness.coeffs[i]) < 1e-6);
  CHECK(std::abs(eval_poly(e.witness, z0)) >= e.phi_value - e.solver_gap);
  CHECK(weighted_sup_norm(e.witness, k, 4) <= 1.0 + 1e-9);
}

TEST_CASE("phi_n: on K the value is one") {
  auto k = circle_sample(64);
  CVector z0{k.points[5][0]};
  auto e = phi_n(segment(), k, 6, z0);
  CHECK(e.phi_value == doctest::Approx(1.0).epsilon(1e-7));

  auto t = torus_sample(8, 8);
  auto f = phi_n(quadrilateral_body(), t, 2, t.points[9]);
  CHECK(f.phi_value == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("phi_n: interval against the Chebyshev polynomial") {
  // The Lobatto sample contains the extremal points of T_8, so the sampled
  // problem has the same value as the continuous one: |T_8(2)|.
  auto k = interval_sample(513);
  CVector z0{2.0};
  ExtremalOptions o;
  o.tol = 1e-10;
  auto e = phi_n(segment(), k, 8, z0, o);
  double t8 = chebyshev_t(8, 2.0);
  CHECK(t8 == 18817.0);
  CHECK(e.phi_value == doctest::Approx(t8).epsilon(1e-8));
  double g = std::log(2.0 + std::sqrt(3.0));
  CHECK(e.v_estimate - g == doctest::Approx(std::log((1.0 + std::pow(2.0 + std::sqrt(3.0), -16.0)) / 2.0) / 8.0));
  // only degrees dividing 512 have all their extremal points in the sample
  for (int n : {2, 4, 16}) {
    auto en = phi_n(segment(), k, n, z0, o);
    CHECK(en.phi_value == doctest::Approx(chebyshev_t(n, 2.0)).epsilon(1e-8));
  }
}

TEST_CASE("phi_n: complex point off the interval") {
  // T_4 is feasible; Bernstein-Walsh bounds any feasible p by |z + sqrt(z^2-1)|^4.
  auto k = interval_sample(257);
  Complex z(0.3, 0.8);
  CVector z0{z};
  auto e = phi_n(segment(), k, 4, z0, {1e-10, 200, 0});
  Complex t4 = 8.0 * std::pow(z, 4) - 8.0 * z * z + 1.0;
  Complex w = z + std::sqrt(z * z - 1.0);
  if (std::abs(w) < 1.0) w = z - std::sqrt(z * z - 1.0);
  CHECK(e.phi_value >= std::abs(t4) * (1.0 - 1e-9));
  CHECK(e.phi_upper <= std::pow(std::abs(w), 4) * (1.0 + 1e-3));
}

TEST_CASE("phi_n: weights shift the value") {
  // Q = log 2 on the unit circle: Phi_n(z) = 2^n |z|^n for |z| >= 1.
  auto k = with_weights(circle_sample(128), std::vector<double>(128, std::log(2.0)));
  CVector z0{3.0};
  auto e = phi_n(segment(), k, 3, z0);
  CHECK(e.phi_value == doctest::Approx(216.0).epsilon(1e-7));
}

TEST_CASE("ExtremalProblem reuse and witness audit") {
  auto k = circle_sample(32);
  ExtremalProblem prob(segment(), k, 5);
  CHECK(prob.basis_size() == 6);
  CVector z0{1.5};
  auto e = prob.solve(z0);
  CHECK(e.phi_value == doctest::Approx(std::pow(1.5, 5)).epsilon(1e-7));
  auto audit = audit_witness(prob, e, circle_sample(4096));
  CHECK(audit.overshoot < 1e-6);
}

TEST_CASE("v_estimate_grid: disk field and values on K") {
  auto k = circle_sample(512);
  GridSpec g;
  g.base = {0.0};
  g.axes.push_back(linspace_axis("re", 0, AxisPart::Re, -3.0, 3.0, 7));
  g.axes.push_back(linspace_axis("im", 0, AxisPart::Im, -3.0, 3.0, 7));
  auto f = v_estimate_grid(segment(), k, 16, g);
  REQUIRE(f.values.size() == 49);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double r = std::abs(g.point(i)[0]);
    CHECK(std::abs(f.values[i] - std::max(std::log(r), 0.0)) <= 0.02);
  }

  GridSpec on;
  on.base = {0.0};
  GridAxis ax{"re", 0, AxisPart::Re, {-1.0, 1.0}};
  on.axes.push_back(ax);
  auto z = v_estimate_grid(segment(), k, 8, on);
  for (double v : z.values) CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("grid_field round trip") {
  GridField f;
  f.spec.base = {Complex(0.0, 0.0), Complex(1.0, 0.0)};
  f.spec.axes.push_back(linspace_axis("x", 0, AxisPart::Re, -1.0, 1.0, 3));
  f.spec.axes.push_back(GridAxis{"y", 1, AxisPart::Im, {0.1, 0.2}});
  for (std::size_t i = 0; i < f.spec.size(); ++i) f.values.push_back(std::sqrt(2.0) * static_cast<double>(i) / 3.0);
  f.meta["quantity"] = "test";
  auto path = std::filesystem::temp_directory_path() / "plpot_grid_roundtrip.csv";
  write_grid(f, path);
  auto back = read_grid(path);
  CHECK(back.values == f.values);
  CHECK(back.meta.at("quantity") == "test");
  CHECK(back.spec.shape() == f.spec.shape());
  CHECK(back.spec.point(4) == f.spec.point(4));
  std::filesystem::remove(path);
  std::filesystem::remove(meta_path(path));
}

TEST_CASE("check_submultiplicative") {
  auto k = circle_sample(256);
  std::vector<CVector> zs{{2.0}, {k.points[3][0]}};
  auto r = check_submultiplicative(segment(), k, 2, 3, zs, {1e-10, 200, 0});
  CHECK(r.holds);
  CHECK(r.entries[0].phi_n == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(r.entries[0].phi_m == doctest::Approx(8.0).epsilon(1e-8));
  CHECK(r.entries[0].phi_nm == doctest::Approx(32.0).epsilon(1e-8));
  CHECK(r.entries[0].ratio == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.entries[1].ratio == doctest::Approx(1.0).epsilon(1e-7));

  auto t = torus_sample(12, 12);
  std::vector<CVector> zq{{Complex(1.5, 0.2), Complex(0.1, 2.0)}};
  auto q = check_submultiplicative(quadrilateral_body(), t, 1, 1, zq);
  CHECK(q.holds);
  CHECK(q.entries[0].certified);
}

TEST_CASE("monotone_weight_limit") {
  auto seg = segment();
  auto k = circle_sample(64);
  std::vector<double> q(64, 0.0);
  q[0] = kInf;
  std::vector<CVector> zs{{2.0}, {Complex(0.0, 1.5)}};

  auto same = monotone_weight_limit(seg, k, {q, q, q}, q, 3, zs);
  for (const auto& row : same.gaps)
    for (double g : row) CHECK(std::abs(g) < 1e-7);

  std::vector<std::vector<double>> seq;
  for (double j : {0.5, 1.0, 2.0, 4.0}) {
    std::vector<double> qj(64, 0.0);
    for (std::size_t i = 0; i < 64; ++i) qj[i] = std::min(q[i], j);
    seq.push_back(qj);
  }
  auto up = monotone_weight_limit(seg, k, seq, q, 3, zs);
  CHECK(up.nondecreasing);

  auto line = interval_sample(33);
  std::vector<std::vector<double>> down;
  for (double j : {1.0, 2.0}) {
    std::vector<double> qj;
    for (const auto& p : line.points) qj.push_back(std::abs(p[0]) / j);
    down.push_back(qj);
  }
  CHECK(kind_of([&] { monotone_weight_limit(seg, line, down, std::vector<double>(33, 0.0), 2, zs); }) ==
        ErrorKind::NotMonotone);
}

TEST_CASE("lelong_plus_envelope") {
  auto q = quadrilateral_body();
  GridField u;
  u.spec.base = {0.0, 0.0};
  u.spec.axes.push_back(linspace_axis("r1", 0, AxisPart::Re, 0.5, 4.0, 5));
  u.spec.axes.push_back(linspace_axis("r2", 1, AxisPart::Re, 0.5, 4.0, 5));
  u.values.assign(25, -kInf);
  auto e = lelong_plus_envelope(u, q, 2.0, 0.7);
  for (std::size_t i = 0; i < 25; ++i) {
    auto z = u.spec.point(i);
    CVector zr{z[0] / 2.0, z[1] / 2.0};
    CHECK(e.values[i] == doctest::Approx(0.7 + h_p(q, zr)));
  }
  for (std::size_t i = 0; i < 25; ++i) u.values[i] = h_p(q, u.spec.point(i));
  auto same = lelong_plus_envelope(u, q, 1.0, 0.0);
  for (std::size_t i = 0; i < 25; ++i) CHECK(same.values[i] == u.values[i]);

  auto k = circle_sample(256);
  GridSpec g;
  g.base = {0.0};
  g.axes.push_back(linspace_axis("re", 0, AxisPart::Re, 0.0, 3.0, 4));
  auto v = v_estimate_grid(segment(), k, 8, g);
  auto env = lelong_plus_envelope(v, segment(), 1.0, -1e-6);
  for (std::size_t i = 0; i < v.values.size(); ++i) CHECK(env.values[i] == v.values[i]);
}
