#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "holoscreen/errors.hpp"
#include "holoscreen/feasibility.hpp"

namespace holo::lp {
namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kPriceEps = 1e-11;
constexpr std::size_t kDegenerateRun = 50;

}  // namespace

FeasibilityResult find_nonnegative_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                            double tol) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m) throw DimensionMismatch("feasibility: b has the wrong length");

  FeasibilityResult out;
  if (m == 0) {
    out.feasible = true;
    out.x = Eigen::VectorXd::Zero(n);
    return out;
  }

  // Rows scaled so b ≥ 0; artificials form the starting basis.
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(m);
  for (Eigen::Index i = 0; i < m; ++i)
    if (b(i) < 0.0) sign(i) = -1.0;

  const Eigen::Index cols = n + m + 1;
  const Eigen::Index rhs = n + m;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, cols);
  t.topLeftCorner(m, n) = sign.asDiagonal() * a;
  t.block(0, n, m, m).setIdentity();
  t.col(rhs).head(m) = sign.cwiseProduct(b);
  // Reduced costs of phase 1 (cost 1 on artificials), objective stored as −w.
  t.row(m).head(n) = -t.topLeftCorner(m, n).colwise().sum();
  t(m, rhs) = -t.col(rhs).head(m).sum();

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  const std::size_t max_pivots = 50 * static_cast<std::size_t>(n + m) + 1000;
  std::size_t stalled = 0;
  double last_w = -t(m, rhs);
  Eigen::RowVectorXd prow(cols);
  Eigen::VectorXd pcol(m + 1);

  while (true) {
    const bool bland = stalled >= kDegenerateRun;
    Eigen::Index enter = -1;
    double best = -kPriceEps;
    for (Eigen::Index j = 0; j < rhs; ++j) {
      const double d = t(m, j);
      if (d < best) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double piv = t(i, enter);
      if (piv <= kPivotEps) continue;
      const double r = t(i, rhs) / piv;
      const bool tie = leave >= 0 && std::abs(r - ratio) <= 1e-12 * (1.0 + std::abs(ratio));
      if (leave < 0 || (r < ratio && !tie) ||
          (tie && (bland ? basis[static_cast<std::size_t>(i)] <
                               basis[static_cast<std::size_t>(leave)]
                         : piv > t(leave, enter)))) {
        leave = i;
        ratio = std::min(r, ratio);
      }
    }
    // Phase 1 is bounded below by zero, so an improving column always has a
    // positive entry; reaching here means the pricing tolerance is too loose.
    if (leave < 0) break;

    const double piv = t(leave, enter);
    prow = t.row(leave) / piv;
    pcol = t.col(enter);
    pcol(leave) = 0.0;
    t.noalias() -= pcol * prow;
    t.row(leave) = prow;
    t.col(enter).setZero();
    t(leave, enter) = 1.0;
    basis[static_cast<std::size_t>(leave)] = enter;

    if (++out.pivots > max_pivots)
      throw Error("feasibility: simplex exceeded " + std::to_string(max_pivots) + " pivots");
    const double w = -t(m, rhs);
    if (w < last_w - 1e-15) {
      stalled = 0;
      last_w = w;
    } else {
      ++stalled;
    }
  }

  out.phase1_objective = std::max(0.0, -t(m, rhs));
  out.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index v = basis[static_cast<std::size_t>(i)];
    if (v < n) out.x(v) = std::max(0.0, t(i, rhs));
  }
  out.residual = m > 0 ? (a * out.x - b).cwiseAbs().maxCoeff() : 0.0;
  out.feasible = out.phase1_objective <= tol && out.residual <= tol;
  if (!out.feasible) {
    out.farkas.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) out.farkas(i) = sign(i) * (1.0 - t(m, n + i));
  }
  return out;
}

}  // namespace holo::lp
