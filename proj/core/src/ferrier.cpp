#include "plpot/ferrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>

#include "plpot/errors.hpp"
#include "plpot/grid_field.hpp"
#include "plpot/minimize.hpp"

namespace plpot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> to_real(std::span<const Complex> z) {
  std::vector<double> v(2 * z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    v[2 * k] = z[k].real();
    v[2 * k + 1] = z[k].imag();
  }
  return v;
}

CVector to_complex(std::span<const double> v) {
  CVector z(v.size() / 2);
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = {v[2 * k], v[2 * k + 1]};
  return z;
}

double norm(std::span<const Complex> a, std::span<const Complex> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::norm(a[k] - b[k]);
  return std::sqrt(s);
}

double norm(std::span<const Complex> a) {
  double s = 0.0;
  for (auto v : a) s += std::norm(v);
  return std::sqrt(s);
}

// Search coordinates for hat_delta and the identity check. A radial delta in
// d = 1 only needs the real line through 0 and s: for each modulus the point
// of that line closest to s is on it.
struct Embedding {
  std::vector<double> centre;
  std::function<CVector(std::span<const double>)> map;
};

Embedding embed(std::span<const Complex> s, bool radial) {
  if (!radial) return {to_real(s), [](std::span<const double> y) { return to_complex(y); }};
  if (s.size() != 1) throw Error(ErrorKind::DimensionMismatch, "the radial reduction needs d = 1");
  const double a = std::abs(s[0]);
  const Complex u = a > 0.0 ? s[0] / a : Complex(1.0, 0.0);
  return {{a}, [u](std::span<const double> y) { return CVector{y[0] * u}; }};
}

std::string show(std::span<const Complex> z) {
  std::string s = "(";
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (k) s += ", ";
    s += format_double(z[k].real()) + (z[k].imag() < 0 ? "-" : "+") + format_double(std::abs(z[k].imag())) + "i";
  }
  return s + ")";
}

// min over moduli rho of prod rho_k^{-V_k} + |rho - a| / tau for one vertex.
// Stationary points satisfy rho_k - a_k = kappa V_k / rho_k with
// kappa = tau g(rho) |rho - a|, so rho_k(kappa) solves a quadratic and
// kappa is the root of the decreasing function
//   lambda(kappa) = log tau + log g(rho(kappa)) + log |V / rho(kappa)|.
struct VertexMin {
  double value;
  std::vector<double> rho;
};

VertexMin vertex_min(const std::vector<double>& v, const std::vector<double>& a, double tau) {
  const std::size_t d = a.size();
  auto log_g = [&](const std::vector<double>& rho) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k)
      if (v[k] != 0.0) s -= v[k] * std::log(rho[k]);
    return s;
  };
  bool constant = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  if (constant) return {1.0, a};

  std::vector<double> rho(d);
  auto at = [&](double log_kappa) {
    double kappa = std::exp(log_kappa);
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      if (v[k] == 0.0) {
        rho[k] = a[k];
        continue;
      }
      rho[k] = 0.5 * (a[k] + std::sqrt(a[k] * a[k] + 4.0 * kappa * v[k]));
      s += (v[k] / rho[k]) * (v[k] / rho[k]);
    }
    return std::log(tau) + log_g(rho) + 0.5 * std::log(s);
  };

  // a itself is optimal when tau |grad g(a)| <= 1
  bool interior = true;
  for (std::size_t k = 0; k < d; ++k)
    if (v[k] != 0.0 && a[k] == 0.0) interior = false;
  if (interior) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k)
      if (v[k] != 0.0) s += (v[k] / a[k]) * (v[k] / a[k]);
    if (std::log(tau) + log_g(a) + 0.5 * std::log(s) <= 0.0) return {std::exp(log_g(a)), a};
  }

  double lo = -40.0, hi = 40.0;
  while (at(lo) <= 0.0 && lo > -1400.0) lo -= 40.0;
  while (at(hi) >= 0.0 && hi < 1400.0) hi += 40.0;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (at(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  at(0.5 * (lo + hi));
  double dist2 = 0.0;
  for (std::size_t k = 0; k < d; ++k) dist2 += (rho[k] - a[k]) * (rho[k] - a[k]);
  return {std::exp(log_g(rho)) + std::sqrt(dist2) / tau, rho};
}

}  // namespace

FerrierResult ferrier(const ComplexFn& u, double t, std::span<const Complex> x,
                      const FerrierOptions& options) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::PreconditionViolation, "t must be positive");
  FerrierResult r;
  r.x.assign(x.begin(), x.end());
  r.t = t;
  r.u_value = u(x);
  if (!std::isfinite(r.u_value))
    throw Error(ErrorKind::PreconditionViolation, "u(x) must be finite");
  const double base = std::exp(-r.u_value);
  r.search_radius = t * base;
  auto centre = to_real(x);
  auto objective = [&](std::span<const double> y) {
    CVector z = to_complex(y);
    double uy = u(z);
    double d = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) d += (y[i] - centre[i]) * (y[i] - centre[i]);
    return std::exp(-uy) + std::sqrt(d) / t;
  };
  BallSearch search;
  search.grid = options.grid;
  search.lipschitz = options.lipschitz > 0.0 ? options.lipschitz + 1.0 / t : 0.0;
  search.tol = options.tol;
  search.max_evals = options.max_evals;
  auto best = minimize_in_ball(objective, centre, r.search_radius, search);
  double m = std::min(best.value, base);
  r.minimizer = best.value < base ? to_complex(best.argmin) : r.x;
  r.u_t_value = -std::log(m);
  r.grid_error = best.error / std::max(best.lower_bound, 0.5 * m);
  r.certified = best.certified;
  return r;
}

FerrierResult ferrier_hp(const ConvexBody& body, double t, std::span<const Complex> x, double c) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::PreconditionViolation, "t must be positive");
  if (x.size() != static_cast<std::size_t>(body.dim()))
    throw Error(ErrorKind::DimensionMismatch, "point and body dimensions differ");
  const std::size_t d = x.size();
  FerrierResult r;
  r.x.assign(x.begin(), x.end());
  r.t = t;
  r.u_value = c + h_p(body, x);
  r.search_radius = t * std::exp(-r.u_value);
  r.certified = true;

  std::vector<double> a(d);
  for (std::size_t k = 0; k < d; ++k) a[k] = std::abs(x[k]);
  const double tau = t * std::exp(-c);
  double best = std::exp(-h_p(body, x));  // y = x
  std::vector<double> rho = a;
  for (const auto& v : body.vertices_double()) {
    auto vm = vertex_min(v, a, tau);
    if (vm.value < best) {
      best = vm.value;
      rho = vm.rho;
    }
  }
  r.u_t_value = c - std::log(best);
  r.minimizer.resize(d);
  for (std::size_t k = 0; k < d; ++k)
    r.minimizer[k] = a[k] > 0.0 ? x[k] * (rho[k] / a[k]) : Complex(rho[k], 0.0);
  return r;
}

ContractReport ferrier_contracts(const FerrierFn& u_t, const std::vector<double>& t_list,
                                 const std::vector<CVector>& sample, const ContractOptions& options) {
  if (t_list.empty()) throw Error(ErrorKind::PreconditionViolation, "t_list is empty");
  for (std::size_t j = 1; j < t_list.size(); ++j)
    if (!(t_list[j] < t_list[j - 1]))
      throw Error(ErrorKind::PreconditionViolation, "t_list must be strictly decreasing");
  if ((options.c || !options.shells.empty()) && !options.body)
    throw Error(ErrorKind::PreconditionViolation, "clauses (iii) and (iv) need the body");

  ContractReport rep;
  rep.t_list = t_list;
  const std::size_t nt = t_list.size(), ns = sample.size();
  rep.values.assign(nt, std::vector<double>(ns));
  for (std::size_t j = 0; j < nt; ++j)
    for (std::size_t i = 0; i < ns; ++i) rep.values[j][i] = u_t(t_list[j], sample[i]).u_t_value;

  auto fail = [&](const std::string& clause, const std::string& witness) {
    if (rep.failed_clause.empty()) {
      rep.failed_clause = clause;
      rep.witness = witness;
    }
  };

  // (i)
  rep.worst_monotone = -kInf;
  for (std::size_t j = 1; j < nt; ++j)
    for (std::size_t i = 0; i < ns; ++i) {
      double diff = rep.values[j][i] - rep.values[j - 1][i];
      if (diff > rep.worst_monotone) rep.worst_monotone = diff;
      if (diff > options.monotone_tol) {
        rep.monotone = false;
        fail("(i) monotone in t", "x = " + show(sample[i]) + ", t = " + format_double(t_list[j - 1]) +
                                      " -> " + format_double(t_list[j]));
      }
    }
  if (nt == 1) rep.worst_monotone = 0.0;

  // (ii)
  rep.worst_lipschitz = -kInf;
  for (std::size_t j = 0; j < nt; ++j)
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t k = i; k < ns; ++k) {
        double lhs = std::abs(std::exp(-rep.values[j][i]) - std::exp(-rep.values[j][k]));
        double excess = lhs - norm(sample[i], sample[k]) / t_list[j];
        if (excess > rep.worst_lipschitz) rep.worst_lipschitz = excess;
        if (excess > options.lipschitz_tol) {
          rep.lipschitz = false;
          fail("(ii) Lipschitz", "x = " + show(sample[i]) + ", y = " + show(sample[k]) +
                                     ", t = " + format_double(t_list[j]));
        }
      }

  // (iii) and (iv)
  std::vector<double> hp(ns);
  if (options.body)
    for (std::size_t i = 0; i < ns; ++i) hp[i] = h_p(*options.body, sample[i]);
  if (options.c) {
    rep.worst_lower = -kInf;
    for (std::size_t j = 0; j < nt; ++j)
      for (std::size_t i = 0; i < ns; ++i) {
        double deficit = *options.c + hp[i] - rep.values[j][i];
        if (deficit > rep.worst_lower) rep.worst_lower = deficit;
        if (deficit > options.lower_tol) {
          rep.lower = false;
          fail("(iii) lower bound c + H_P",
               "x = " + show(sample[i]) + ", t = " + format_double(t_list[j]));
        }
      }
  }
  if (options.body) {
    rep.shells.resize(nt);
    rep.shell_constant.assign(nt, -kInf);
    for (std::size_t j = 0; j < nt; ++j) {
      for (std::size_t s = 0; s + 1 < options.shells.size(); ++s) {
        ShellStat st;
        st.lo = options.shells[s];
        st.hi = options.shells[s + 1];
        st.max_gap = -kInf;
        st.min_gap = kInf;
        for (std::size_t i = 0; i < ns; ++i) {
          double r = norm(sample[i]);
          bool last = s + 2 == options.shells.size();
          if (r < st.lo || r > st.hi || (!last && r == st.hi)) continue;
          double gap = rep.values[j][i] - hp[i];
          ++st.count;
          st.max_gap = std::max(st.max_gap, gap);
          st.min_gap = std::min(st.min_gap, gap);
        }
        rep.shells[j].push_back(st);
      }
      for (std::size_t i = 0; i < ns; ++i)
        rep.shell_constant[j] = std::max(rep.shell_constant[j], rep.values[j][i] - hp[i]);
    }
  }

  if (!rep.failed_clause.empty() && options.throw_on_violation)
    throw Error(ErrorKind::ContractViolation, rep.failed_clause + " fails at " + rep.witness);
  return rep;
}

HatDelta hat_delta(const ComplexFn& delta, double lam, std::span<const Complex> s,
                   const HatDeltaOptions& options) {
  if (!(lam > 0.0)) throw Error(ErrorKind::PreconditionViolation, "lambda must be positive");
  HatDelta h;
  const double ds = delta(s);
  if (!(ds >= 0.0) || !std::isfinite(ds))
    throw Error(ErrorKind::PreconditionViolation, "delta must be finite and nonnegative");
  h.search_radius = ds / lam;
  auto e = embed(s, options.radial);
  const auto& centre = e.centre;
  auto objective = [&](std::span<const double> y) {
    double d = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) d += (y[i] - centre[i]) * (y[i] - centre[i]);
    return delta(e.map(y)) + lam * std::sqrt(d);
  };
  BallSearch search;
  search.grid = options.grid;
  search.lipschitz = options.lipschitz > 0.0 ? options.lipschitz + lam : 0.0;
  search.tol = options.tol;
  search.max_evals = options.max_evals;
  auto best = minimize_in_ball(objective, centre, h.search_radius, search);
  h.value = std::max(0.0, std::min(best.value, ds));
  h.minimizer = e.map(best.argmin);
  h.error = best.error;
  h.certified = best.certified;
  return h;
}

namespace {

// Bounds on min phi over |s' - s| <= r / lam, where
// phi(s') = delta(s') + lam |s' - s| - r, so that the d_lam-ball of radius r
// around (s, 0) lies in {|t| < delta} iff the minimum is >= 0. Best-first
// subdivision of cubes; the lam |s' - s| part is bounded exactly per cube.
struct PhiBounds {
  double lower, upper;
};

PhiBounds ball_minimum(const ComplexFn& delta, double lam, const Embedding& e, double r,
                       double lip_delta, double resolution, std::size_t budget) {
  const auto& centre = e.centre;
  const std::size_t m = centre.size();
  const double rad = r / lam, rootm = std::sqrt(double(m));
  struct Cell {
    double lb;
    std::vector<double> c;
    double half;
    bool operator>(const Cell& o) const { return lb > o.lb; }
  };
  double upper = kInf, floor_lb = kInf;
  std::size_t used = 0;
  auto bound = [&](std::vector<double> c, double half) -> std::optional<Cell> {
    double dc = 0.0, box = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double diff = c[i] - centre[i];
      dc += diff * diff;
      double gap = std::max(0.0, std::abs(diff) - half);
      box += gap * gap;
    }
    dc = std::sqrt(dc);
    const double hd = half * rootm;
    if (std::sqrt(box) > rad) return std::nullopt;
    std::vector<double> p = c;
    double dp = dc, reach = hd;
    if (dc > rad) {
      for (std::size_t i = 0; i < m; ++i) p[i] = centre[i] + (c[i] - centre[i]) * (rad / dc);
      dp = rad;
      reach = 2.0 * hd;
    }
    double dv = delta(e.map(p));
    ++used;
    upper = std::min(upper, dv + lam * dp - r);
    return Cell{dv - lip_delta * reach + lam * std::sqrt(box) - r, std::move(c), half};
  };
  std::priority_queue<Cell, std::vector<Cell>, std::greater<>> heap;
  if (auto root = bound(centre, rad)) heap.push(std::move(*root));
  while (!heap.empty()) {
    if (upper < 0.0) break;
    const Cell& top = heap.top();
    if (top.lb >= 0.0 || used >= budget) break;
    Cell cell = top;
    heap.pop();
    if (2.0 * (lip_delta + lam) * cell.half * rootm <= resolution) {
      floor_lb = std::min(floor_lb, cell.lb);
      continue;
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      std::vector<double> c = cell.c;
      for (std::size_t i = 0; i < m; ++i) c[i] += ((mask >> i) & 1 ? 0.5 : -0.5) * cell.half;
      if (auto child = bound(std::move(c), cell.half / 2.0)) heap.push(std::move(*child));
    }
  }
  double lower = floor_lb;
  if (!heap.empty()) lower = std::min(lower, heap.top().lb);
  return {std::min(lower, upper), upper};
}

}  // namespace

IdentityReport distance_identity_check(const ComplexFn& delta, double lam,
                                       const std::vector<CVector>& sample,
                                       const HatDeltaOptions& options, bool throw_on_violation) {
  if (!(options.lipschitz > 0.0))
    throw Error(ErrorKind::PreconditionViolation, "the identity check needs a Lipschitz constant for delta");
  IdentityReport rep;
  rep.lam = lam;
  // each side is resolved to about options.tol
  const double resolution = options.tol / 4.0;
  std::size_t worst = 0;
  for (const auto& s : sample) {
    IdentityEntry e;
    e.s = s;
    auto h = hat_delta(delta, lam, s, options);
    e.lhs = h.value;
    e.lhs_error = h.error;

    // d_lam((s,0), complement) lies in [0, delta(s)]: (s, delta(s)) is outside.
    // With F(r) the minimum of delta + lam |. - s| over the radius-r/lam ball
    // (nonincreasing in r), radius r fits iff F(r) >= r; bounds on F(r) - r
    // at one r move both ends of the bracket.
    double lo = 0.0, hi = delta(s);
    auto emb = embed(s, options.radial);
    for (int it = 0; it < 80 && hi - lo > 2.0 * options.tol; ++it) {
      double mid = 0.5 * (lo + hi);
      auto b = ball_minimum(delta, lam, emb, mid, options.lipschitz, resolution, options.max_evals / 4);
      if (b.upper < 0.0) {
        hi = mid;
      } else if (b.lower >= 0.0) {
        lo = mid;
      } else {
        double nlo = std::max(lo, mid + b.lower), nhi = std::min(hi, mid + b.upper);
        bool stuck = nhi - nlo > 0.9 * (hi - lo);
        lo = nlo;
        hi = nhi;
        if (stuck) break;
      }
    }
    e.rhs = 0.5 * (lo + hi);
    e.rhs_error = 0.5 * (hi - lo);
    e.tolerance = e.lhs_error + e.rhs_error + 1e-12;
    e.agrees = std::abs(e.lhs - e.rhs) <= e.tolerance;
    double diff = std::abs(e.lhs - e.rhs);
    if (diff > rep.worst_difference || rep.entries.empty()) {
      rep.worst_difference = diff;
      worst = rep.entries.size();
    }
    rep.max_tolerance = std::max(rep.max_tolerance, e.tolerance);
    if (!e.agrees) rep.holds = false;
    rep.entries.push_back(std::move(e));
  }
  if (!rep.holds && throw_on_violation) {
    const auto& e = rep.entries[worst];
    throw Error(ErrorKind::ToleranceExceeded,
                "identity fails at s = " + show(e.s) + ": lhs " + format_double(e.lhs) + ", rhs " +
                    format_double(e.rhs) + ", tolerance " + format_double(e.tolerance));
  }
  return rep;
}

SubmeanResult submean_check(const ComplexFn& u, std::span<const Complex> z0, std::span<const Complex> dir,
                            double r, int nodes, double value_tol) {
  if (!(r > 0.0)) throw Error(ErrorKind::PreconditionViolation, "radius must be positive");
  if (dir.size() != z0.size()) throw Error(ErrorKind::DimensionMismatch, "direction and point differ in size");
  if (norm(dir) == 0.0) throw Error(ErrorKind::PreconditionViolation, "direction must be nonzero");
  if (nodes < 4) throw Error(ErrorKind::PreconditionViolation, "need at least 4 nodes");
  auto average = [&](int n) {
    double s = 0.0;
    CVector p(z0.size());
    for (int j = 0; j < n; ++j) {
      Complex e = std::polar(r, 2.0 * std::numbers::pi * j / n);
      for (std::size_t k = 0; k < p.size(); ++k) p[k] = z0[k] + e * dir[k];
      s += u(p);
    }
    return s / n;
  };
  SubmeanResult out;
  out.lhs = u(z0);
  out.rhs = average(nodes);
  out.quadrature_error = std::abs(out.rhs - average(nodes / 2));
  out.ok = out.lhs <= out.rhs + out.quadrature_error + value_tol + 1e-12 * (1.0 + std::abs(out.lhs));
  return out;
}

}  // namespace plpot
