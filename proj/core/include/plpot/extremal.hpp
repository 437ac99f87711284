#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "plpot/convex_body.hpp"
#include "plpot/grid_field.hpp"
#include "plpot/polynomial.hpp"
#include "plpot/sample_set.hpp"

namespace plpot {

struct ExtremalOptions {
  double tol = 1e-8;   // relative gap on Phi_n, i.e. absolute on log Phi_n
  int max_iter = 200;  // interior point iterations per solve
  unsigned threads = 0;  // grid scans; 0 = hardware concurrency
};

/// (1/n) log Phi_n(z0) with the certificate that produced it.
struct ExtremalEstimate {
  CVector z0;
  int n = 0;
  double phi_value = 0.0;  // |witness(z0)|, feasible lower bound
  double phi_upper = 0.0;  // dual upper bound
  double log_phi = 0.0;
  double log_phi_upper = 0.0;
  double v_estimate = 0.0;  // log_phi / n
  double solver_gap = 0.0;  // phi_upper - phi_value
  double relative_gap = 0.0;
  int iterations = 0;
  Polynomial witness;               // monomial coefficients
  Eigen::VectorXcd basis_coeffs;    // coefficients in the solver basis
};

/// The discretized program for fixed (P, K, n), factored once and re-solved
/// for any number of evaluation points.
///
/// Basis: per coordinate, Chebyshev polynomials on the sample's real range when
/// every sample coordinate is real and the lattice set is downward closed in
/// that coordinate (both bases then span the same space); otherwise monomials
/// scaled by the sample's bounding radius.
///
/// Maximizing Re p(z0) equals maximizing |p(z0)|: the constraints are invariant
/// under p -> e^{i theta} p.
class ExtremalProblem {
 public:
  ExtremalProblem(const ConvexBody& body, const SampledWeightedSet& k, int n);

  ExtremalEstimate solve(std::span<const Complex> z0, const ExtremalOptions& options = {}) const;

  int n() const noexcept { return n_; }
  std::size_t basis_size() const noexcept { return support_.size(); }
  const std::vector<MultiIndex>& support() const noexcept { return support_; }
  const SampledWeightedSet& sample() const noexcept { return sample_; }

  /// Value at z of the polynomial with the given solver-basis coefficients.
  Complex evaluate(const Eigen::VectorXcd& coeffs, std::span<const Complex> z) const;

 private:
  Eigen::VectorXcd basis_row(std::span<const Complex> z) const;
  Polynomial to_monomials(const Eigen::VectorXcd& coeffs) const;

  int n_;
  int d_;
  std::string body_tag_;
  ConvexBody body_;
  SampledWeightedSet sample_;
  std::vector<MultiIndex> support_;
  std::vector<bool> chebyshev_;
  std::vector<double> lo_, hi_, radius_;
  Eigen::MatrixXd a_;               // real form of Q, A^T A = I
  Eigen::MatrixXcd r_;              // m x m upper triangular
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic> perm_;
  std::vector<std::vector<std::vector<double>>> to_monomial_;  // [coord][j] -> coefficients in z
};

/// max_i |p(zeta_i)| e^{-n q_i}; points with q = +inf contribute 0.
double weighted_sup_norm(const Polynomial& p, const SampledWeightedSet& k, int n);

ExtremalEstimate phi_n(const ConvexBody& body, const SampledWeightedSet& k, int n,
                       std::span<const Complex> z0, const ExtremalOptions& options = {});

/// Field of (1/n) log Phi_n over the grid.
GridField v_estimate_grid(const ConvexBody& body, const SampledWeightedSet& k, int n,
                          const GridSpec& grid, const ExtremalOptions& options = {});

struct SubmultEntry {
  CVector z;
  double phi_n = 0.0, phi_m = 0.0, phi_nm = 0.0;
  double ratio = 0.0;      // phi_n * phi_m / phi_nm
  double tolerance = 0.0;  // from the three relative gaps
  bool holds = false;      // ratio <= 1 + tolerance
  bool certified = false;  // lower_n * lower_m <= upper_{n+m}
};

struct SubmultReport {
  int n = 0, m = 0;
  std::vector<SubmultEntry> entries;
  double worst_ratio = 0.0;
  bool holds = true;
};

SubmultReport check_submultiplicative(const ConvexBody& body, const SampledWeightedSet& k, int n,
                                      int m, const std::vector<CVector>& z_list,
                                      const ExtremalOptions& options = {});

struct MonotoneWeightReport {
  // estimates[z][j] = (1/n) log Phi_n for weight Q_j; limit[z] for Q itself.
  std::vector<std::vector<double>> estimates;
  std::vector<double> limit;
  std::vector<std::vector<double>> gaps;  // limit - estimate
  bool nondecreasing = true;
  double worst_decrease = 0.0;
};

/// Throws NotMonotone unless q_seq[j] <= q_seq[j+1] <= q_limit on every sample.
MonotoneWeightReport monotone_weight_limit(const ConvexBody& body, const SampledWeightedSet& k,
                                           const std::vector<std::vector<double>>& q_seq,
                                           const std::vector<double>& q_limit, int n,
                                           const std::vector<CVector>& z_list,
                                           const ExtremalOptions& options = {});

/// max(u, m + H_P(z/R)) pointwise on the field's grid.
GridField lelong_plus_envelope(const GridField& u, const ConvexBody& body, double radius, double m);

struct WitnessAudit {
  double max_weighted = 0.0;  // weighted sup-norm of the witness on the denser sample
  double overshoot = 0.0;     // max(0, max_weighted - 1)
};

/// Re-evaluates the witness against another sample of K.
WitnessAudit audit_witness(const ExtremalProblem& problem, const ExtremalEstimate& estimate,
                           const SampledWeightedSet& denser);

}  // namespace plpot
