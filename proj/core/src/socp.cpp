#include "plpot/socp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace plpot {

namespace {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

double jnorm2(const Vector3d& u) {
  double r = u.tail<2>().norm();
  return (u(0) - r) * (u(0) + r);
}

Vector3d jordan(const Vector3d& u, const Vector3d& v) {
  Vector3d r;
  r(0) = u.dot(v);
  r.tail<2>() = u(0) * v.tail<2>() + v(0) * u.tail<2>();
  return r;
}

// Solves lam o x = b.
Vector3d jordan_div(const Vector3d& lam, const Vector3d& b) {
  double det = jnorm2(lam);
  Vector3d x;
  x(0) = (lam(0) * b(0) - lam.tail<2>().dot(b.tail<2>())) / det;
  x.tail<2>() = (b.tail<2>() - x(0) * lam.tail<2>()) / lam(0);
  return x;
}

// Largest alpha with u + alpha v in the cone.
double max_step(const Vector3d& u, const Vector3d& v) {
  double a = jnorm2(v);
  double b = 2.0 * (u(0) * v(0) - u.tail<2>().dot(v.tail<2>()));
  double c = jnorm2(u);
  double best = kInf;
  auto consider = [&](double r) {
    if (r > 0.0) best = std::min(best, r);
  };
  if (std::abs(a) < 1e-300) {
    if (b < 0.0) consider(-c / b);
  } else {
    double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      if (q != 0.0) {
        consider(q / a);
        consider(c / q);
      }
    }
  }
  if (v(0) < 0.0) best = std::min(best, -u(0) / v(0));
  return best;
}

// Symmetric Nesterov-Todd scaling of a pair in the cone interior:
// w z = w^{-1} s = lam.
struct Nt {
  Matrix3d w, winv;
  Vector3d lam;
};

Nt nt_scaling(const Vector3d& s, const Vector3d& z) {
  double a = std::sqrt(jnorm2(s)), b = std::sqrt(jnorm2(z));
  Vector3d sb = s / a, zb = z / b;
  double c = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
  Vector3d wb = (sb + Vector3d(zb(0), -zb(1), -zb(2))) / (2.0 * c);
  double eta = std::sqrt(a / b);
  Matrix3d W;
  W(0, 0) = wb(0);
  W.block<1, 2>(0, 1) = wb.tail<2>().transpose();
  W.block<2, 1>(1, 0) = wb.tail<2>();
  W.block<2, 2>(1, 1) =
      Eigen::Matrix2d::Identity() + wb.tail<2>() * wb.tail<2>().transpose() / (1.0 + wb(0));
  Matrix3d J = Vector3d(1.0, -1.0, -1.0).asDiagonal();
  Nt out;
  out.w = eta * W;
  out.winv = J * W * J / eta;
  out.lam(0) = c;
  out.lam.tail<2>() = ((c + zb(0)) * sb.tail<2>() + (c + sb(0)) * zb.tail<2>()) / (sb(0) + zb(0) + 2.0 * c);
  out.lam *= std::sqrt(a * b);
  return out;
}

// H = R^T R.
struct SchurFactor {
  MatrixXd r;
  VectorXd solve(const VectorXd& b) const {
    VectorXd y = r.triangularView<Eigen::Upper>().transpose().solve(b);
    return r.triangularView<Eigen::Upper>().solve(y);
  }
};

struct Bounds {
  double lower, upper;
  VectorXd x, y;
};

Bounds certify(const MatrixXd& A, const Eigen::LDLT<MatrixXd>& gram, const VectorXd& g,
               const VectorXd& x, const std::vector<Vector3d>& z) {
  const auto nb = z.size();
  Bounds b;
  VectorXd ax = A * x;
  double worst = 0.0;
  for (std::size_t i = 0; i < nb; ++i) worst = std::max(worst, ax.segment<2>(2 * i).norm());
  b.x = worst > 0.0 ? VectorXd(x / worst) : x;
  b.lower = worst > 0.0 ? std::max(0.0, g.dot(b.x)) : 0.0;

  VectorXd y(2 * nb);
  for (std::size_t i = 0; i < nb; ++i) y.segment<2>(2 * i) = -z[i].tail<2>();
  y += A * gram.solve(g - A.transpose() * y);
  b.upper = 0.0;
  for (std::size_t i = 0; i < nb; ++i) b.upper += y.segment<2>(2 * i).norm();
  b.y = std::move(y);
  return b;
}

}  // namespace

SocpResult solve_unit_ball_socp(const MatrixXd& A, const VectorXd& g, const SocpOptions& options) {
  const Eigen::Index nvar = A.cols();
  const std::size_t nb = static_cast<std::size_t>(A.rows() / 2);
  const MatrixXd gram = A.transpose() * A;
  const Eigen::LDLT<MatrixXd> gram_f(gram);

  // Scalings are kept as products W = W_k ... W_1 of NT factors computed from
  // the scaled iterates, which stay well conditioned near the boundary.
  // W z = W^{-T} s = lam.
  VectorXd x = VectorXd::Zero(nvar);
  double rx_scale = 1.0;
  std::vector<Matrix3d> W(nb, Matrix3d::Identity()), Wi(nb, Matrix3d::Identity());
  std::vector<Vector3d> lam(nb, Vector3d(1.0, 0.0, 0.0)), s(nb), z(nb);

  MatrixXd abar(3 * nb, nvar);

  SocpResult res;
  Bounds best{0.0, kInf, x, VectorXd::Zero(2 * nb)};

  // Newton step for
  //   G^T dz = bx,  G dx + ds = bz,  lam o (W dz + W^{-T} ds) = dsr
  // with G_i = [0; -A_i]. Returns the scaled steps W^{-T} ds and W dz.
  auto newton = [&](const SchurFactor& Hf, const VectorXd& bx,
                    const std::vector<Vector3d>& bz, const std::vector<Vector3d>& dsr,
                    VectorXd& dx, std::vector<Vector3d>& dz, std::vector<Vector3d>& ds) {
    std::vector<Vector3d> bs(nb);
    VectorXd v(2 * nb);
    for (std::size_t i = 0; i < nb; ++i) {
      bs[i] = jordan_div(lam[i], dsr[i]);
      Vector3d t = Wi[i] * (Wi[i].transpose() * (bz[i] - W[i].transpose() * bs[i]));
      v.segment<2>(2 * i) = -t.tail<2>();
    }
    dx = Hf.solve(bx + A.transpose() * v);
    VectorXd adx = A * dx;
    for (std::size_t i = 0; i < nb; ++i) {
      Vector3d gdx(0.0, -adx(2 * i), -adx(2 * i + 1));
      dz[i] = Wi[i] * (Wi[i].transpose() * (gdx + W[i].transpose() * bs[i] - bz[i]));
      ds[i] = W[i].transpose() * (bs[i] - W[i] * dz[i]);
    }
  };

  // Newton solve plus iterative refinement against the unreduced system.
  auto refined = [&](const SchurFactor& Hf, const VectorXd& bx,
                     const std::vector<Vector3d>& bz, const std::vector<Vector3d>& dsr,
                     VectorXd& dx, std::vector<Vector3d>& dz, std::vector<Vector3d>& ds) {
    newton(Hf, bx, bz, dsr, dx, dz, ds);
    std::vector<Vector3d> rz(nb), rs(nb), ez(nb), es(nb);
    VectorXd ex;
    for (int pass = 0; pass < 2; ++pass) {
      VectorXd zb(2 * nb);
      for (std::size_t i = 0; i < nb; ++i) zb.segment<2>(2 * i) = dz[i].tail<2>();
      VectorXd rx = bx + A.transpose() * zb;
      VectorXd adx = A * dx;
      for (std::size_t i = 0; i < nb; ++i) {
        rz[i] = bz[i] - Vector3d(ds[i](0), ds[i](1) - adx(2 * i), ds[i](2) - adx(2 * i + 1));
        rs[i] = dsr[i] - jordan(lam[i], W[i] * dz[i] + Wi[i].transpose() * ds[i]);
      }
      newton(Hf, rx, rz, rs, ex, ez, es);
      dx += ex;
      for (std::size_t i = 0; i < nb; ++i) {
        dz[i] += ez[i];
        ds[i] += es[i];
      }
    }
  };

  for (int it = 0; it <= options.max_iter; ++it) {
    res.iterations = it;
    for (std::size_t i = 0; i < nb; ++i) {
      s[i] = W[i].transpose() * lam[i];
      z[i] = Wi[i] * lam[i];
    }
    Bounds b = certify(A, gram_f, g, x, z);
    if (b.lower > best.lower) {
      best.lower = b.lower;
      best.x = b.x;
    }
    if (b.upper < best.upper) {
      best.upper = b.upper;
      best.y = b.y;
    }
    if (best.upper - best.lower <= options.tol * best.lower) {
      res.converged = true;
      break;
    }
    if (it == options.max_iter) break;

    // The start point is primal feasible and every step keeps the linear
    // residuals on the segment towards zero, so they are tracked rather than
    // recomputed from s and z (which carry the conditioning of W).
    VectorXd rx = -rx_scale * g;
    std::vector<Vector3d> bz(nb, Vector3d::Zero());
    double mu = 0.0;
    for (std::size_t i = 0; i < nb; ++i) mu += lam[i].squaredNorm();
    mu /= static_cast<double>(nb);

    // H = sum_i A_i^T (W_i^{-1} W_i^{-T})[1:,1:] A_i = abar^T abar, factored by
    // QR of abar so the normal equations are never formed.
    for (std::size_t i = 0; i < nb; ++i) {
      abar.middleRows<3>(3 * i) = Wi[i].bottomRows<2>().transpose() * A.middleRows<2>(2 * i);
    }
    if (!abar.allFinite()) break;
    Eigen::HouseholderQR<MatrixXd> qr(abar);
    MatrixXd R = qr.matrixQR().topRows(nvar).triangularView<Eigen::Upper>();
    if ((R.diagonal().array().abs() == 0.0).any()) break;
    SchurFactor Hf{R};

    std::vector<Vector3d> dsr(nb), dz(nb), ds(nb), sz(nb), ss(nb);
    VectorXd dx;
    for (std::size_t i = 0; i < nb; ++i) dsr[i] = -jordan(lam[i], lam[i]);
    refined(Hf, -rx, bz, dsr, dx, dz, ds);

    auto step = [&] {
      double alpha = kInf;
      for (std::size_t i = 0; i < nb; ++i) {
        ss[i] = Wi[i].transpose() * ds[i];
        sz[i] = W[i] * dz[i];
        alpha = std::min(alpha, max_step(lam[i], ss[i]));
        alpha = std::min(alpha, max_step(lam[i], sz[i]));
      }
      return alpha;
    };
    double sigma = std::pow(std::max(0.0, 1.0 - std::min(1.0, step())), 3);

    for (std::size_t i = 0; i < nb; ++i)
      dsr[i] = -jordan(lam[i], lam[i]) - jordan(ss[i], sz[i]) + Vector3d(sigma * mu, 0.0, 0.0);
    refined(Hf, -rx, bz, dsr, dx, dz, ds);

    double alpha = std::min(1.0, 0.99 * step());
    if (!(alpha > 0.0) || !dx.allFinite()) break;
    x += alpha * dx;
    rx_scale *= 1.0 - alpha;
    bool ok = true;
    for (std::size_t i = 0; i < nb && ok; ++i) {
      Vector3d st = lam[i] + alpha * ss[i], zt = lam[i] + alpha * sz[i];
      if (!(jnorm2(st) > 0.0 && jnorm2(zt) > 0.0)) {
        ok = false;
        break;
      }
      Nt f = nt_scaling(st, zt);
      W[i] = f.w * W[i];
      Wi[i] = Wi[i] * f.winv;
      lam[i] = f.lam;
    }
    if (!ok) break;
  }

  res.x = std::move(best.x);
  res.y = std::move(best.y);
  res.lower = best.lower;
  res.upper = best.upper;
  return res;
}

}  // namespace plpot
