#pragma once

// Nonnegative linear feasibility: find x ≥ 0 with A·x = b, or a Farkas
// certificate that none exists.

#include <Eigen/Dense>

#include <cstddef>

namespace holo::lp {

struct FeasibilityResult {
  bool feasible = false;
  Eigen::VectorXd x;   ///< basic feasible solution when feasible
  /// When infeasible: yᵀA ≤ 0 columnwise and yᵀb > 0.
  Eigen::VectorXd farkas;
  double phase1_objective = 0.0;  ///< Σ artificials at termination
  double residual = 0.0;          ///< ‖A·x − b‖_∞ of the returned x
  std::size_t pivots = 0;
};

/// Two-phase simplex, phase 1 only, on a dense tableau. Dantzig pricing with a
/// switch to Bland's rule after a run of degenerate pivots.
FeasibilityResult find_nonnegative_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                            double tol);

}  // namespace holo::lp
