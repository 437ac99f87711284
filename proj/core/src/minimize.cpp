#include "plpot/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "plpot/errors.hpp"

namespace plpot {

namespace {

using Vec = std::vector<double>;

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct Ball {
  Vec c;
  double r;

  Vec project(Vec p) const {
    double d = dist(p, c);
    if (d > r)
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = c[i] + (p[i] - c[i]) * (r / d);
    return p;
  }
};

struct Tracker {
  const RealVecFn& f;
  BallMinimum& out;
  double eval(const Vec& p) {
    double v = f(p);
    ++out.evaluations;
    if (std::isnan(v)) throw Error(ErrorKind::NonFiniteSample, "objective returned NaN");
    if (v < out.value) {
      out.value = v;
      out.argmin = p;
    }
    return v;
  }
};

double step_floor(const Ball& ball) {
  return 1e-13 * std::max(1.0, ball.r + dist(ball.c, Vec(ball.c.size(), 0.0)));
}

void compass(Tracker& t, const Ball& ball, Vec x, double fx, std::size_t budget) {
  const std::size_t m = x.size();
  double step = ball.r / 4.0;
  const double floor = step_floor(ball);
  std::size_t used = 0;
  while (step > floor && used < budget) {
    bool moved = false;
    for (std::size_t i = 0; i < m && !moved; ++i)
      for (double sgn : {1.0, -1.0}) {
        Vec y = x;
        y[i] += sgn * step;
        y = ball.project(y);
        double fy = t.eval(y);
        ++used;
        if (fy < fx) {
          x = std::move(y);
          fx = fy;
          moved = true;
          break;
        }
      }
    if (!moved) step *= 0.5;
  }
}

struct Cell {
  double lb;
  Vec c;
  double half;
  bool operator>(const Cell& o) const { return lb > o.lb; }
};

}  // namespace

BallMinimum minimize_in_ball(const RealVecFn& f, std::span<const double> center, double radius,
                             const BallSearch& search) {
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw Error(ErrorKind::PreconditionViolation, "search radius must be finite and >= 0");
  const std::size_t m = center.size();
  Ball ball{Vec(center.begin(), center.end()), radius};
  BallMinimum out;
  out.value = std::numeric_limits<double>::infinity();
  Tracker t{f, out};
  double f0 = t.eval(ball.c);
  if (radius == 0.0) {
    out.lower_bound = out.value;
    out.certified = true;
    return out;
  }

  // grid, when affordable
  const int g = std::max(2, search.grid);
  if (std::pow(double(g), double(m)) <= double(search.max_evals) / 4) {
    std::vector<int> idx(m, 0);
    while (true) {
      Vec p(m);
      for (std::size_t k = 0; k < m; ++k) p[k] = ball.c[k] - radius + 2.0 * radius * idx[k] / (g - 1);
      if (dist(p, ball.c) <= radius) t.eval(p);
      std::size_t k = 0;
      while (k < m && ++idx[k] == g) idx[k++] = 0;
      if (k == m) break;
    }
  }

  // compass polish from the centre, the 3^m lattice starts and the grid optimum
  const std::size_t budget = 400 * (m + 1);
  compass(t, ball, ball.c, f0, budget);
  {
    std::vector<int> idx(m, 0);
    while (true) {
      Vec p(m);
      for (std::size_t k = 0; k < m; ++k) p[k] = ball.c[k] + 0.5 * radius * (idx[k] - 1);
      p = ball.project(p);
      compass(t, ball, p, t.eval(p), budget);
      std::size_t k = 0;
      while (k < m && ++idx[k] == 3) idx[k++] = 0;
      if (k == m) break;
    }
  }
  compass(t, ball, out.argmin, out.value, budget);

  if (search.lipschitz > 0.0) {
    const double l2 = 2.0 * search.lipschitz, rootm = std::sqrt(double(m));
    std::priority_queue<Cell, std::vector<Cell>, std::greater<>> heap;
    heap.push({-std::numeric_limits<double>::infinity(), ball.c, radius});
    double lower = out.value;
    bool exhausted = true;
    while (!heap.empty()) {
      Cell cell = heap.top();
      if (cell.lb >= out.value - search.tol) break;
      if (out.evaluations >= search.max_evals) {
        exhausted = false;
        break;
      }
      heap.pop();
      const double half = cell.half / 2.0, hd = half * rootm;
      for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        Vec cc(m);
        for (std::size_t k = 0; k < m; ++k) cc[k] = cell.c[k] + ((mask >> k) & 1 ? half : -half);
        double dc = dist(cc, ball.c);
        if (dc > radius + hd) continue;
        // every point of cube and ball is within hd of the centre when it is
        // inside the ball, else within 2 hd of its projection
        double lb = dc <= radius ? t.eval(cc) - 0.5 * l2 * hd : t.eval(ball.project(cc)) - l2 * hd;
        if (lb < out.value - search.tol) heap.push({lb, std::move(cc), half});
      }
    }
    // pruned cells satisfied lb >= best - tol when pushed
    lower = exhausted ? out.value - search.tol : std::min(lower, heap.top().lb);
    out.lower_bound = lower;
    out.error = out.value - lower;
    out.certified = exhausted || out.error <= search.tol;
  } else {
    // uncertified: local slope times the compass resolution
    double slope = 0.0, h = radius / (4.0 * (g - 1));
    for (std::size_t k = 0; k < m; ++k)
      for (double sgn : {1.0, -1.0}) {
        Vec y = out.argmin;
        y[k] += sgn * h;
        y = ball.project(y);
        double d = dist(y, out.argmin);
        if (d > 0) slope = std::max(slope, std::abs(f(y) - out.value) / d);
      }
    out.error = slope * step_floor(ball);
    out.lower_bound = out.value - out.error;
  }
  return out;
}

}  // namespace plpot
