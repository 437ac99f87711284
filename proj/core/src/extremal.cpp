#include "plpot/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "parallel.hpp"
#include "plpot/errors.hpp"
#include "plpot/socp.hpp"

namespace plpot {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ExtremalProblem::ExtremalProblem(const ConvexBody& body, const SampledWeightedSet& k, int n)
    : n_(n), d_(body.dim()), body_tag_(body.tag()), body_(body), sample_(k) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolation, "n must be >= 1");
  sample_.validate();
  if (static_cast<int>(sample_.dim()) != d_)
    throw Error(ErrorKind::DimensionMismatch, "sample dimension does not match body");
  support_ = lattice_points(body, n);

  std::vector<std::size_t> eff;
  for (std::size_t i = 0; i < sample_.size(); ++i)
    if (sample_.q_values[i] < kInf) eff.push_back(i);

  const std::set<MultiIndex> lookup(support_.begin(), support_.end());
  std::vector<int> maxdeg(d_, 0);
  for (const auto& j : support_)
    for (int c = 0; c < d_; ++c) maxdeg[c] = std::max(maxdeg[c], j[c]);

  chebyshev_.assign(d_, false);
  lo_.assign(d_, 0.0);
  hi_.assign(d_, 0.0);
  radius_.assign(d_, 1.0);
  to_monomial_.resize(d_);
  for (int c = 0; c < d_; ++c) {
    bool real = true;
    double lo = kInf, hi = -kInf, rad = 0.0;
    for (auto i : eff) {
      const auto& z = sample_.points[i][c];
      real = real && z.imag() == 0.0;
      lo = std::min(lo, z.real());
      hi = std::max(hi, z.real());
      rad = std::max(rad, std::abs(z));
    }
    bool closed = std::all_of(support_.begin(), support_.end(), [&](const MultiIndex& j) {
      if (j[c] == 0) return true;
      MultiIndex down = j;
      --down[c];
      return lookup.count(down) > 0;
    });
    chebyshev_[c] = real && closed && hi - lo > 1e-12 * std::max(1.0, rad);
    lo_[c] = lo;
    hi_[c] = hi;
    radius_[c] = rad > 0.0 ? rad : 1.0;

    auto& table = to_monomial_[c];
    table.resize(maxdeg[c] + 1);
    if (chebyshev_[c]) {
      // u = alpha z + beta maps [lo, hi] onto [-1, 1]
      double alpha = 2.0 / (hi - lo), beta = -(hi + lo) / (hi - lo);
      table[0] = {1.0};
      if (maxdeg[c] >= 1) table[1] = {beta, alpha};
      for (int j = 1; j < maxdeg[c]; ++j) {
        std::vector<double> next(j + 2, 0.0);
        for (int i = 0; i <= j; ++i) {
          next[i] += 2.0 * beta * table[j][i];
          next[i + 1] += 2.0 * alpha * table[j][i];
        }
        for (std::size_t i = 0; i < table[j - 1].size(); ++i) next[i] -= table[j - 1][i];
        table[j + 1] = std::move(next);
      }
    } else {
      for (int j = 0; j <= maxdeg[c]; ++j) {
        table[j].assign(j + 1, 0.0);
        table[j][j] = std::pow(radius_[c], -j);
      }
    }
  }

  const auto m = static_cast<Eigen::Index>(support_.size());
  const auto rows = static_cast<Eigen::Index>(eff.size());
  if (rows < m)
    throw Error(ErrorKind::Unbounded, std::to_string(eff.size()) + " effective samples for " +
                                          std::to_string(m) + " basis polynomials");
  Eigen::MatrixXcd B(rows, m);
  for (Eigen::Index r = 0; r < rows; ++r) {
    auto i = eff[r];
    double w = std::exp(-n * sample_.q_values[i]);
    B.row(r) = w * basis_row(sample_.points[i]).transpose();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(rows, m);
  qr.setThreshold(1e-10);
  qr.compute(B);
  if (qr.rank() < m)
    throw Error(ErrorKind::Unbounded, "sample does not determine Poly(nP): rank " +
                                          std::to_string(qr.rank()) + " < " + std::to_string(m));
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, m);
  r_ = qr.matrixR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
  perm_ = qr.colsPermutation();

  a_.resize(2 * rows, 2 * m);
  for (Eigen::Index r = 0; r < rows; ++r) {
    a_.block(2 * r, 0, 1, m) = Q.row(r).real();
    a_.block(2 * r, m, 1, m) = -Q.row(r).imag();
    a_.block(2 * r + 1, 0, 1, m) = Q.row(r).imag();
    a_.block(2 * r + 1, m, 1, m) = Q.row(r).real();
  }
}

Eigen::VectorXcd ExtremalProblem::basis_row(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != d_)
    throw Error(ErrorKind::DimensionMismatch, "point dimension does not match body");
  std::vector<std::vector<Complex>> per(d_);
  for (int c = 0; c < d_; ++c) {
    int deg = static_cast<int>(to_monomial_[c].size()) - 1;
    auto& v = per[c];
    v.resize(deg + 1);
    v[0] = 1.0;
    if (chebyshev_[c]) {
      Complex u = (2.0 * z[c] - lo_[c] - hi_[c]) / (hi_[c] - lo_[c]);
      if (deg >= 1) v[1] = u;
      for (int j = 1; j < deg; ++j) v[j + 1] = 2.0 * u * v[j] - v[j - 1];
    } else {
      Complex u = z[c] / radius_[c];
      for (int j = 1; j <= deg; ++j) v[j] = v[j - 1] * u;
    }
  }
  Eigen::VectorXcd row(support_.size());
  for (std::size_t j = 0; j < support_.size(); ++j) {
    Complex p = 1.0;
    for (int c = 0; c < d_; ++c) p *= per[c][support_[j][c]];
    row(j) = p;
  }
  return row;
}

Complex ExtremalProblem::evaluate(const Eigen::VectorXcd& coeffs, std::span<const Complex> z) const {
  return basis_row(z).transpose() * coeffs;
}

Polynomial ExtremalProblem::to_monomials(const Eigen::VectorXcd& coeffs) const {
  std::map<MultiIndex, Complex> acc;
  for (std::size_t j = 0; j < support_.size(); ++j) {
    if (coeffs(j) == Complex(0.0)) continue;
    // odometer over the monomial expansion of each coordinate's basis polynomial
    MultiIndex idx(std::vector<int>(d_, 0));
    while (true) {
      Complex term = coeffs(j);
      for (int c = 0; c < d_; ++c) term *= to_monomial_[c][support_[j][c]][idx[c]];
      if (term != Complex(0.0)) acc[idx] += term;
      int c = d_ - 1;
      while (c >= 0) {
        if (++idx[c] < static_cast<int>(to_monomial_[c][support_[j][c]].size())) break;
        idx[c] = 0;
        --c;
      }
      if (c < 0) break;
    }
  }
  std::vector<Term> terms(acc.begin(), acc.end());
  return make_polynomial(body_, n_, terms);
}

ExtremalEstimate ExtremalProblem::solve(std::span<const Complex> z0,
                                        const ExtremalOptions& options) const {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::PreconditionViolation, "tol must be positive");
  const auto m = static_cast<Eigen::Index>(support_.size());
  Eigen::VectorXcd a = basis_row(z0);
  if (!a.allFinite()) throw Error(ErrorKind::NonFiniteSample, "basis overflows at z0");
  // Re(a^T c) with c = P R^{-1} y equals Re(h^T y), h = R^{-T} P^T a.
  Eigen::VectorXcd h = r_.triangularView<Eigen::Upper>().transpose().solve(perm_.transpose() * a);
  Eigen::VectorXd g(2 * m);
  g.head(m) = h.real();
  g.tail(m) = -h.imag();
  const double scale = g.norm();

  SocpOptions so;
  so.tol = options.tol;
  so.max_iter = options.max_iter;
  SocpResult res = solve_unit_ball_socp(a_, g / scale, so);
  if (!res.converged)
    throw Error(ErrorKind::SolverStall,
                "relative gap " + format_double((res.upper - res.lower) / res.lower) + " after " +
                    std::to_string(res.iterations) + " iterations");

  Eigen::VectorXcd y(m);
  y.real() = res.x.head(m);
  y.imag() = res.x.tail(m);
  Eigen::VectorXcd c = perm_ * Eigen::VectorXcd(r_.triangularView<Eigen::Upper>().solve(y));

  ExtremalEstimate e;
  e.z0.assign(z0.begin(), z0.end());
  e.n = n_;
  e.phi_value = res.lower * scale;
  e.phi_upper = res.upper * scale;
  e.log_phi = std::log(res.lower) + std::log(scale);
  e.log_phi_upper = std::log(res.upper) + std::log(scale);
  e.v_estimate = e.log_phi / n_;
  e.solver_gap = e.phi_upper - e.phi_value;
  e.relative_gap = (res.upper - res.lower) / res.lower;
  e.iterations = res.iterations;
  e.basis_coeffs = c;
  e.witness = to_monomials(c);
  return e;
}

double weighted_sup_norm(const Polynomial& p, const SampledWeightedSet& k, int n) {
  if (k.points.empty()) throw Error(ErrorKind::EmptySample, "sample has no points");
  double best = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!(k.q_values[i] < kInf)) continue;
    best = std::max(best, std::abs(eval_poly(p, k.points[i])) * std::exp(-n * k.q_values[i]));
  }
  return best;
}

ExtremalEstimate phi_n(const ConvexBody& body, const SampledWeightedSet& k, int n,
                       std::span<const Complex> z0, const ExtremalOptions& options) {
  return ExtremalProblem(body, k, n).solve(z0, options);
}

GridField v_estimate_grid(const ConvexBody& body, const SampledWeightedSet& k, int n,
                          const GridSpec& grid, const ExtremalOptions& options) {
  ExtremalProblem problem(body, k, n);
  GridField f;
  f.spec = grid;
  f.values.resize(grid.size());
  std::vector<double> gaps(grid.size());
  detail::parallel_for(
      grid.size(),
      [&](std::size_t i) {
        auto e = problem.solve(grid.point(i), options);
        f.values[i] = e.v_estimate;
        gaps[i] = e.relative_gap;
      },
      options.threads);
  f.meta["quantity"] = "(1/n) log Phi_n";
  f.meta["body"] = body.tag();
  f.meta["n"] = std::to_string(n);
  f.meta["sample"] = k.label;
  f.meta["sample_size"] = std::to_string(k.size());
  f.meta["mesh"] = format_double(k.mesh);
  f.meta["tol"] = format_double(options.tol);
  f.meta["basis_size"] = std::to_string(problem.basis_size());
  f.meta["max_relative_gap"] =
      format_double(gaps.empty() ? 0.0 : *std::max_element(gaps.begin(), gaps.end()));
  return f;
}

SubmultReport check_submultiplicative(const ConvexBody& body, const SampledWeightedSet& k, int n,
                                      int m, const std::vector<CVector>& z_list,
                                      const ExtremalOptions& options) {
  ExtremalProblem pn(body, k, n), pm(body, k, m), pnm(body, k, n + m);
  SubmultReport rep;
  rep.n = n;
  rep.m = m;
  rep.entries.resize(z_list.size());
  detail::parallel_for(
      z_list.size(),
      [&](std::size_t i) {
        auto a = pn.solve(z_list[i], options);
        auto b = pm.solve(z_list[i], options);
        auto c = pnm.solve(z_list[i], options);
        auto& e = rep.entries[i];
        e.z = z_list[i];
        e.phi_n = a.phi_value;
        e.phi_m = b.phi_value;
        e.phi_nm = c.phi_value;
        e.ratio = std::exp(a.log_phi + b.log_phi - c.log_phi);
        e.tolerance = a.relative_gap + b.relative_gap + c.relative_gap + 1e-12;
        e.holds = e.ratio <= 1.0 + e.tolerance;
        e.certified = a.log_phi + b.log_phi <= c.log_phi_upper + 1e-14;
      },
      options.threads);
  for (const auto& e : rep.entries) {
    rep.worst_ratio = std::max(rep.worst_ratio, e.ratio);
    rep.holds = rep.holds && e.holds;
  }
  return rep;
}

MonotoneWeightReport monotone_weight_limit(const ConvexBody& body, const SampledWeightedSet& k,
                                           const std::vector<std::vector<double>>& q_seq,
                                           const std::vector<double>& q_limit, int n,
                                           const std::vector<CVector>& z_list,
                                           const ExtremalOptions& options) {
  auto check = [&](const std::vector<double>& lo, const std::vector<double>& hi,
                   const std::string& what) {
    if (lo.size() != k.size() || hi.size() != k.size())
      throw Error(ErrorKind::DimensionMismatch, "weight vector length differs from sample size");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(lo[i] <= hi[i]))
        throw Error(ErrorKind::NotMonotone,
                    what + " decreases at sample " + std::to_string(i));
  };
  for (std::size_t j = 0; j + 1 < q_seq.size(); ++j)
    check(q_seq[j], q_seq[j + 1], "Q_" + std::to_string(j + 1));
  if (!q_seq.empty()) check(q_seq.back(), q_limit, "limit weight");

  MonotoneWeightReport rep;
  std::vector<std::vector<ExtremalEstimate>> est(q_seq.size());
  for (std::size_t j = 0; j < q_seq.size(); ++j) {
    ExtremalProblem p(body, with_weights(k, q_seq[j]), n);
    for (const auto& z : z_list) est[j].push_back(p.solve(z, options));
  }
  ExtremalProblem pl(body, with_weights(k, q_limit), n);
  for (std::size_t zi = 0; zi < z_list.size(); ++zi) {
    auto lim = pl.solve(z_list[zi], options);
    rep.limit.push_back(lim.v_estimate);
    std::vector<double> row, gaps;
    for (std::size_t j = 0; j < q_seq.size(); ++j) {
      row.push_back(est[j][zi].v_estimate);
      gaps.push_back(lim.v_estimate - est[j][zi].v_estimate);
      if (j > 0) {
        double slack = (est[j][zi].relative_gap + est[j - 1][zi].relative_gap) / n + 1e-12;
        double drop = est[j - 1][zi].v_estimate - est[j][zi].v_estimate;
        rep.worst_decrease = std::max(rep.worst_decrease, drop);
        if (drop > slack) rep.nondecreasing = false;
      }
    }
    rep.estimates.push_back(std::move(row));
    rep.gaps.push_back(std::move(gaps));
  }
  return rep;
}

GridField lelong_plus_envelope(const GridField& u, const ConvexBody& body, double radius, double m) {
  if (!(radius > 0.0)) throw Error(ErrorKind::PreconditionViolation, "R must be positive");
  GridField out = u;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    CVector z = u.spec.point(i);
    for (auto& c : z) c /= radius;
    out.values[i] = std::max(u.values[i], m + h_p(body, z));
  }
  out.meta["envelope.R"] = format_double(radius);
  out.meta["envelope.m"] = format_double(m);
  return out;
}

WitnessAudit audit_witness(const ExtremalProblem& problem, const ExtremalEstimate& estimate,
                           const SampledWeightedSet& denser) {
  denser.validate();
  WitnessAudit a;
  for (std::size_t i = 0; i < denser.size(); ++i) {
    if (!(denser.q_values[i] < kInf)) continue;
    double v = std::abs(problem.evaluate(estimate.basis_coeffs, denser.points[i])) *
               std::exp(-problem.n() * denser.q_values[i]);
    a.max_weighted = std::max(a.max_weighted, v);
  }
  a.overshoot = std::max(0.0, a.max_weighted - 1.0);
  return a;
}

}  // namespace plpot
