#include "holoscreen/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "holoscreen/errors.hpp"
#include "holoscreen/feasibility.hpp"

namespace holo::lp {
namespace {

double marginal_error(const std::vector<double>& w, const std::vector<MarginalGroup>& groups) {
  double worst = std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0);
  std::vector<double> m;
  for (const auto& g : groups) {
    m.assign(g.target.size(), 0.0);
    for (std::size_t a = 0; a < w.size(); ++a) m[g.label[a]] += w[a];
    for (std::size_t t = 0; t < m.size(); ++t) worst = std::max(worst, std::abs(m[t] - g.target[t]));
  }
  return worst;
}

std::vector<double> proportional_fit(std::size_t columns, const std::vector<MarginalGroup>& groups,
                                     double tol) {
  std::vector<double> w(columns, 1.0 / static_cast<double>(columns));
  std::vector<double> m;
  constexpr int kSweeps = 2000;
  for (int sweep = 0; sweep < kSweeps; ++sweep) {
    for (const auto& g : groups) {
      m.assign(g.target.size(), 0.0);
      for (std::size_t a = 0; a < columns; ++a) m[g.label[a]] += w[a];
      for (std::size_t a = 0; a < columns; ++a) {
        const double have = m[g.label[a]];
        w[a] = have > 0.0 ? w[a] * g.target[g.label[a]] / have : 0.0;
      }
    }
    if (marginal_error(w, groups) <= 0.1 * tol) break;
  }
  return w;
}

}  // namespace

MarginalSolution solve_marginal_problem(std::size_t columns, const std::vector<MarginalGroup>& groups,
                                        bool prefer_max_entropy, double tol) {
  std::size_t rows = 1;
  for (const auto& g : groups) {
    if (g.label.size() != columns) throw DimensionMismatch("marginal group labels every atom");
    for (std::size_t t : g.label)
      if (t >= g.target.size()) throw ValidationError("marginal label past its target");
    rows += g.target.size();
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(columns));
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows));
  Eigen::Index r = 0;
  for (const auto& g : groups) {
    for (std::size_t col = 0; col < columns; ++col)
      a(r + static_cast<Eigen::Index>(g.label[col]), static_cast<Eigen::Index>(col)) = 1.0;
    for (double t : g.target) b(r++) = t;
  }
  a.row(r).setOnes();
  b(r) = 1.0;

  MarginalSolution out;
  const auto lp = find_nonnegative_solution(a, b, tol);
  if (!lp.feasible) {
    Eigen::VectorXd y = lp.farkas;
    const double scale = y.cwiseAbs().maxCoeff();
    if (scale > 0.0) y /= scale;
    out.violation = y.dot(b);
    out.max_support = columns > 0 ? (y.transpose() * a).maxCoeff() : 0.0;
    r = 0;
    for (const auto& g : groups) {
      out.farkas.emplace_back(g.target.size());
      for (auto& v : out.farkas.back()) v = y(r++);
    }
    out.farkas_normalization = y(r);
    out.max_error = lp.residual;
    return out;
  }

  out.feasible = true;
  if (prefer_max_entropy && columns > 0) {
    auto w = proportional_fit(columns, groups, tol);
    const double err = marginal_error(w, groups);
    if (err <= tol) {
      out.weights = std::move(w);
      out.max_error = err;
      out.max_entropy = true;
      return out;
    }
  }
  out.weights.assign(lp.x.data(), lp.x.data() + lp.x.size());
  out.max_error = marginal_error(out.weights, groups);
  return out;
}

}  // namespace holo::lp
