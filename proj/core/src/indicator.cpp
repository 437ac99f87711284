#include "plpot/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include "plpot/errors.hpp"

namespace plpot {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(const ConvexBody& body, std::size_t d) {
  if (static_cast<int>(d) != body.dim())
    throw Error(ErrorKind::DimensionMismatch, "point dimension does not match body");
}
}  // namespace

LogPoint LogPoint::from_complex(std::span<const Complex> z) {
  LogPoint p;
  for (const auto& zk : z) {
    double m = std::abs(zk);
    p.moduli.push_back(m);
    p.logs.push_back(m > 0.0 ? std::log(m) : -kInf);
  }
  return p;
}

LogPoint LogPoint::from_moduli(std::span<const double> moduli) {
  LogPoint p;
  for (double m : moduli) {
    if (!(m >= 0.0)) throw Error(ErrorKind::PreconditionViolation, "negative modulus");
    p.moduli.push_back(m);
    p.logs.push_back(m > 0.0 ? std::log(m) : -kInf);
  }
  return p;
}

LogPoint LogPoint::from_logs(std::span<const double> logs) {
  LogPoint p;
  for (double l : logs) {
    p.logs.push_back(l);
    p.moduli.push_back(std::exp(l));
  }
  return p;
}

double h_p(const ConvexBody& body, const LogPoint& z) {
  require_dim(body, z.dim());
  double best = -kInf;
  for (const auto& v : body.vertices_double()) {
    double s = 0.0;
    bool excluded = false;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] == 0.0) continue;
      if (z.logs[k] == -kInf) {
        excluded = true;
        break;
      }
      s += v[k] * z.logs[k];
    }
    if (!excluded) best = std::max(best, s);
  }
  return best;
}

double h_p(const ConvexBody& body, std::span<const Complex> z) {
  return h_p(body, LogPoint::from_complex(z));
}

LowerBoundCheck check_lower_bound(const ConvexBody& body, const LogPoint& z, int k) {
  if (k < 1) throw Error(ErrorKind::PreconditionViolation, "k must be >= 1");
  auto kk = check_sigma_in_kp(body, k);
  if (!kk) throw Error(ErrorKind::PreconditionViolation, "Sigma is not contained in kP");
  LowerBoundCheck out;
  out.lhs = h_p(body, z);
  double m = 0.0;
  for (double l : z.logs) m = std::max(m, l);
  out.rhs = m / k;
  out.ok = out.lhs >= out.rhs - 1e-12;
  return out;
}

double distance_to_monomial_superlevel(std::span<const double> p, std::span<const double> v,
                                       double level) {
  auto value = [&](std::span<const double> rho) {
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] == 0.0) continue;
      if (rho[k] <= 0.0) return -kInf;
      s += v[k] * std::log(rho[k]);
    }
    return s;
  };
  if (value(p) >= level) return 0.0;

  // KKT point of min |rho - p|^2 s.t. v.log(rho) >= level:
  // rho_k = (p_k + sqrt(p_k^2 + 4 mu v_k)) / 2, with mu >= 0 fixed by the constraint.
  std::vector<double> rho(p.size());
  auto at = [&](double mu) {
    for (std::size_t k = 0; k < p.size(); ++k)
      rho[k] = v[k] > 0.0 ? 0.5 * (p[k] + std::sqrt(p[k] * p[k] + 4.0 * mu * v[k])) : p[k];
    return value(rho) - level;
  };
  double lo = 0.0, hi = 1.0;
  while (at(hi) < 0.0) {
    lo = hi;
    hi *= 4.0;
    if (!std::isfinite(hi)) throw Error(ErrorKind::PreconditionViolation, "superlevel unreachable");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
    if (mid <= lo || mid >= hi) break;
    if (at(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  at(hi);
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += (rho[k] - p[k]) * (rho[k] - p[k]);
  return std::sqrt(s);
}

namespace {

// Point where the ray {s * omega} meets {H_P = h}. H_P is nondecreasing along
// rays from the origin, and each vertex term is affine in log s, so the first
// crossing is the smallest per-vertex crossing.
std::vector<double> ray_level_point(const ConvexBody& body, std::span<const double> omega,
                                    double h) {
  double best = kInf;
  for (const auto& v : body.vertices_double()) {
    double total = 0.0, dotlog = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] == 0.0) continue;
      if (omega[k] <= 0.0) {
        ok = false;
        break;
      }
      total += v[k];
      dotlog += v[k] * std::log(omega[k]);
    }
    if (!ok || total == 0.0) continue;
    best = std::min(best, (h - dotlog) / total);
  }
  std::vector<double> p(omega.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::exp(best) * omega[k];
  return p;
}

double distance_to_superlevel(const ConvexBody& body, std::span<const double> p, double level) {
  double best = kInf;
  for (const auto& v : body.vertices_double()) {
    bool nonzero = std::any_of(v.begin(), v.end(), [](double c) { return c > 0.0; });
    if (!nonzero) continue;
    best = std::min(best, distance_to_monomial_superlevel(p, v, level));
  }
  return best;
}

double euclid(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace

LevelSetDistance level_set_distance(const ConvexBody& body, const LogPoint& x, double c,
                                    const LevelSetSearch& search) {
  require_dim(body, x.dim());
  if (!(c > 0.0 && c < 1.0)) throw Error(ErrorKind::PreconditionViolation, "C must lie in (0,1)");
  const double h = h_p(body, x);
  if (!(h > 0.0))
    throw Error(ErrorKind::UnboundedLevelSet, "H_P(x) <= 0: level set meets the unit polydisk");
  const double level = h - std::log(c);
  const int d = body.dim();

  std::vector<std::vector<double>> points;
  double resolution = 0.0;

  if (d == 1) {
    points.push_back(ray_level_point(body, std::vector<double>{1.0}, h));
  } else if (d == 2) {
    std::vector<double> angles;
    const double quarter = std::numbers::pi / 2.0;
    for (int i = 0; i <= search.rays; ++i) angles.push_back(quarter * i / search.rays);
    for (int j = 1; j <= search.axis_refinement; ++j) {
      double a = quarter * std::pow(10.0, -14.0 * j / search.axis_refinement);
      angles.push_back(a);
      angles.push_back(quarter - a);
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
    for (double a : angles) {
      std::vector<double> omega{std::cos(a), std::sin(a)};
      if (a == 0.0) omega = {1.0, 0.0};
      if (a == quarter) omega = {0.0, 1.0};
      points.push_back(ray_level_point(body, omega, h));
    }
    for (std::size_t i = 1; i < points.size(); ++i)
      resolution = std::max(resolution, euclid(points[i - 1], points[i]));
  } else {
    // Directions on a simplex grid with step 1/m; neighbours differ by one step
    // moved between two coordinates.
    const int m = std::min(search.rays, 40);
    std::map<std::vector<int>, std::size_t> index;
    std::vector<int> t(d, 0);
    std::function<void(int, int)> rec = [&](int k, int left) {
      if (k == d - 1) {
        t[k] = left;
        std::vector<double> omega(d);
        double nrm = 0.0;
        for (int i = 0; i < d; ++i) nrm += double(t[i]) * t[i];
        for (int i = 0; i < d; ++i) omega[i] = t[i] / std::sqrt(nrm);
        index[t] = points.size();
        points.push_back(ray_level_point(body, omega, h));
        return;
      }
      for (int v = 0; v <= left; ++v) {
        t[k] = v;
        rec(k + 1, left - v);
      }
    };
    rec(0, m);
    for (const auto& [tuple, idx] : index) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (i == j || tuple[j] == 0) continue;
          auto nb = tuple;
          ++nb[i];
          --nb[j];
          if (auto it = index.find(nb); it != index.end())
            resolution = std::max(resolution, euclid(points[idx], points[it->second]));
        }
      }
    }
  }

  LevelSetDistance out;
  out.estimate = kInf;
  out.resolution = resolution;
  for (const auto& p : points) {
    double dist = distance_to_superlevel(body, p, level);
    if (dist < out.estimate) {
      out.estimate = dist;
      out.closest_point = p;
    }
  }
  return out;
}

}  // namespace plpot
