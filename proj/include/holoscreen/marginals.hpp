#pragma once

// The marginal problem over a finite support: find a distribution over
// `columns` atoms whose pushforward along each labeling matches a target.

#include <cstddef>
#include <vector>

#include "holoscreen/config.hpp"

namespace holo::lp {

struct MarginalGroup {
  std::vector<std::size_t> label;  ///< per atom, index into target
  std::vector<double> target;
};

struct MarginalSolution {
  bool feasible = false;
  std::vector<double> weights;  ///< per atom, when feasible
  double max_error = 0.0;       ///< worst marginal mismatch of `weights`
  bool max_entropy = false;     ///< weights are the scaling fixed point from uniform
  /// Farkas multipliers when infeasible: one per (group, target entry), plus
  /// one for Σw = 1. For every atom the multipliers of the cells it lands in
  /// sum to at most `max_support`; the multipliers paired with the targets sum
  /// to `violation` > 0.
  std::vector<std::vector<double>> farkas;
  double farkas_normalization = 0.0;
  double violation = 0.0;
  double max_support = 0.0;
};

/// LP feasibility; when feasible and `prefer_max_entropy` is set, iterative
/// proportional fitting from the uniform distribution is tried first and the
/// LP vertex is used only if it fails to reach `tol`.
MarginalSolution solve_marginal_problem(std::size_t columns, const std::vector<MarginalGroup>& groups,
                                        bool prefer_max_entropy,
                                        double tol = tolerances().marginal);

}  // namespace holo::lp
