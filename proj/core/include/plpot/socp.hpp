#pragma once

#include <Eigen/Dense>

namespace plpot {

struct SocpOptions {
  double tol = 1e-8;   // stop once (upper - lower) <= tol * lower
  int max_iter = 200;  // interior point iterations
};

struct SocpResult {
  Eigen::VectorXd x;   // feasible point (scaled into the constraint set)
  Eigen::VectorXd y;   // dual blocks, A^T y = g
  double lower = 0.0;  // g^T x with x feasible
  double upper = 0.0;  // sum_i |y_i|, a certified bound on the optimum
  int iterations = 0;
  bool converged = false;
};

/// maximize g^T x  subject to  |A_i x| <= 1 for every 2-row block A_i of A.
///
/// Primal-dual interior point method over products of 3-dimensional
/// second-order cones with Nesterov-Todd scaling and a Mehrotra corrector.
/// Both bounds in the result are certified by weak duality: x is rescaled to
/// exact feasibility and y is projected onto {A^T y = g}.
///
/// A must have full column rank.
SocpResult solve_unit_ball_socp(const Eigen::MatrixXd& A, const Eigen::VectorXd& g,
                                const SocpOptions& options = {});

}  // namespace plpot
