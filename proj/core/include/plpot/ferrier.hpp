#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plpot/convex_body.hpp"
#include "plpot/indicator.hpp"
#include "plpot/kernel.hpp"

namespace plpot {

struct FerrierOptions {
  int grid = 9;            // multistart grid per real axis
  double lipschitz = 0.0;  // of e^{-u}; enables the branch-and-bound certificate
  double tol = 1e-12;      // absolute target on the infimum
  std::size_t max_evals = 400000;
};

struct FerrierResult {
  CVector x;
  double t = 0.0;
  double u_value = 0.0;    // u(x)
  double u_t_value = 0.0;  // -log inf_y { e^{-u(y)} + |y - x| / t }
  CVector minimizer;
  double search_radius = 0.0;  // t e^{-u(x)}
  double grid_error = 0.0;     // bound on the error in u_t_value
  bool certified = false;
};

/// u_t(x) by minimizing over the ball |y - x| <= t e^{-u(x)}; points outside
/// cannot beat the candidate y = x.
FerrierResult ferrier(const ComplexFn& u, double t, std::span<const Complex> x,
                      const FerrierOptions& options = {});

/// u_t for u = c + H_P, solved exactly: e^{-H_P} is the minimum over vertices
/// V of prod |y_k|^{-V_k}, each of which is convex in the moduli, and the
/// optimal moduli for fixed V lie on a one-parameter curve.
FerrierResult ferrier_hp(const ConvexBody& body, double t, std::span<const Complex> x, double c = 0.0);

using FerrierFn = std::function<FerrierResult(double t, std::span<const Complex> x)>;

struct ContractOptions {
  std::optional<ConvexBody> body;  // needed for clauses (iii) and (iv)
  std::optional<double> c;         // u >= c + H_P is known: check (iii)
  std::vector<double> shells;      // increasing |z| boundaries for (iv), e.g. {1, 10, 100, 1000}
  double monotone_tol = 0.0;
  double lipschitz_tol = 1e-12;
  double lower_tol = 1e-12;
  bool throw_on_violation = true;
};

struct ShellStat {
  double lo = 0.0, hi = 0.0;
  std::size_t count = 0;
  double max_gap = 0.0, min_gap = 0.0;  // of u_t - H_P
};

struct ContractReport {
  std::vector<double> t_list;
  std::vector<std::vector<double>> values;  // values[j][i] = u_{t_j}(sample_i)
  double worst_monotone = 0.0;   // max of u_{t'} - u_t over t' < t
  double worst_lipschitz = 0.0;  // max of |e^{-u_t(x)} - e^{-u_t(y)}| - |x - y| / t
  double worst_lower = 0.0;      // max of c + H_P - u_t
  std::vector<std::vector<ShellStat>> shells;  // shells[j][s]
  std::vector<double> shell_constant;          // max over the sample of u_t - H_P, per t
  bool monotone = true, lipschitz = true, lower = true;
  std::string failed_clause;
  std::string witness;
};

/// Clauses: (i) u_{t'} <= u_t for t' < t, (ii) e^{-u_t} is 1/t-Lipschitz on
/// all sample pairs, (iii) u_t >= c + H_P, (iv) u_t - H_P per shell.
/// Throws ContractViolation on (i)-(iii) unless throw_on_violation is off.
ContractReport ferrier_contracts(const FerrierFn& u_t, const std::vector<double>& t_list,
                                 const std::vector<CVector>& sample, const ContractOptions& options = {});

struct HatDeltaOptions {
  int grid = 9;
  double lipschitz = 0.0;  // of delta; enables the certificate
  double tol = 1e-6;       // target error of each side
  std::size_t max_evals = 400000;
  bool radial = false;     // d = 1 and delta depends on |s'| only: search a line
};

struct HatDelta {
  double value = 0.0;
  double error = 0.0;
  CVector minimizer;
  double search_radius = 0.0;  // delta(s) / lam
  bool certified = false;
};

/// inf over s' of delta(s') + lam |s' - s|, searched over |s' - s| <= delta(s)/lam.
HatDelta hat_delta(const ComplexFn& delta, double lam, std::span<const Complex> s,
                   const HatDeltaOptions& options = {});

struct IdentityEntry {
  CVector s;
  double lhs = 0.0, lhs_error = 0.0;  // hat_delta
  double rhs = 0.0, rhs_error = 0.0;  // largest d_lam-ball around (s, 0) inside {|t| < delta}
  double tolerance = 0.0;
  bool agrees = false;
};

struct IdentityReport {
  double lam = 0.0;
  std::vector<IdentityEntry> entries;
  double worst_difference = 0.0;
  double max_tolerance = 0.0;
  bool holds = true;
};

/// Compares hat_delta with the d_lam distance from (s, 0) to the complement of
/// {(s', t) : |t| < delta(s')}, the latter by bisection on the ball radius with
/// a certified containment test. Needs options.lipschitz > 0. Throws
/// ToleranceExceeded at the worst point unless throw_on_violation is off.
IdentityReport distance_identity_check(const ComplexFn& delta, double lam,
                                       const std::vector<CVector>& sample,
                                       const HatDeltaOptions& options, bool throw_on_violation = true);

struct SubmeanResult {
  double lhs = 0.0;  // u(z0)
  double rhs = 0.0;  // circle average
  double quadrature_error = 0.0;
  bool ok = false;
};

/// Sub-mean-value probe of u on the circle z0 + r e^{i theta} dir. value_tol
/// covers known error in u itself.
SubmeanResult submean_check(const ComplexFn& u, std::span<const Complex> z0,
                            std::span<const Complex> dir, double r, int nodes, double value_tol = 0.0);

}  // namespace plpot
