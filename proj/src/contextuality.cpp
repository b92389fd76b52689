#include <algorithm>
#include <cmath>
#include <numeric>

#include "holoscreen/cccd.hpp"
#include "holoscreen/marginals.hpp"

namespace holo::cccd {
namespace {

bool point_mass(const Context& c) {
  std::size_t ones = 0;
  for (double p : c.dist) {
    if (p == 1.0) ++ones;
    else if (p != 0.0) return false;
  }
  return ones == 1;
}

/// Outcome of `sub` read off outcome o of `vars`.
std::size_t project_outcome(std::size_t o, const std::vector<std::size_t>& vars,
                            const std::vector<std::size_t>& sub) {
  const std::size_t k = vars.size();
  std::size_t out = 0;
  for (std::size_t v : sub) {
    const auto pos = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin());
    out = (out << 1) | ((o >> (k - 1 - pos)) & 1U);
  }
  return out;
}

}  // namespace

const char* name(Verdict v) noexcept { return v == Verdict::feasible ? "FEASIBLE" : "CONTEXTUAL"; }

std::string ContextFamily::variable_name(std::size_t v) const {
  if (v < names.size()) return names[v];
  return "x" + std::to_string(v);
}

void validate(const ContextFamily& family) {
  if (family.ground > kMaxGroundVariables)
    throw CapacityExceeded("context family over " + std::to_string(family.ground) +
                           " variables exceeds the cap of " + std::to_string(kMaxGroundVariables));
  if (!family.names.empty() && family.names.size() != family.ground)
    throw ValidationError("context family names one entry per variable");
  const double tol = tolerances().normalization;
  for (std::size_t k = 0; k < family.contexts.size(); ++k) {
    const auto& c = family.contexts[k];
    const std::string who = "context " + std::to_string(k);
    std::set<std::size_t> seen;
    for (std::size_t v : c.vars) {
      if (v >= family.ground) throw ValidationError(who + " references variable past the ground set");
      if (!seen.insert(v).second) throw ValidationError(who + " repeats a variable");
    }
    if (c.dist.size() != (std::size_t{1} << c.vars.size()))
      throw ValidationError(who + " has " + std::to_string(c.dist.size()) + " probabilities for " +
                            std::to_string(c.vars.size()) + " variables");
    double sum = 0.0;
    for (double p : c.dist) {
      if (!(p >= 0.0)) throw ValidationError(who + " has a negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol)
      throw ValidationError(who + " is not normalized (sums to " + std::to_string(sum) + ")");
  }
}

std::size_t restrict_assignment(std::uint64_t g, const std::vector<std::size_t>& vars) {
  std::size_t o = 0;
  for (std::size_t v : vars) o = (o << 1) | ((g >> v) & 1U);
  return o;
}

std::string outcome_label(std::size_t outcome, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i)
    if ((outcome >> (width - 1 - i)) & 1U) s[i] = '1';
  return s;
}

std::vector<double> marginal(const std::vector<double>& global, const std::vector<std::size_t>& vars) {
  std::vector<double> m(std::size_t{1} << vars.size(), 0.0);
  for (std::uint64_t g = 0; g < global.size(); ++g) m[restrict_assignment(g, vars)] += global[g];
  return m;
}

ContextFamily prbox_family(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("PR-box weight outside [0,1]");
  ContextFamily f;
  f.ground = 4;
  f.names = {"a0", "a1", "b0", "b1"};
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      Context c{{x, 2 + y}, std::vector<double>(4)};
      for (std::size_t o = 0; o < 4; ++o) {
        const std::size_t a = o >> 1, b = o & 1U;
        c.dist[o] = ((a ^ b) == (x & y)) ? lambda / 2.0 : (1.0 - lambda) / 2.0;
      }
      f.contexts.push_back(std::move(c));
    }
  return f;
}

ContextFamily marginal_family(std::size_t ground, const std::vector<double>& global,
                              const std::vector<std::vector<std::size_t>>& contexts) {
  if (global.size() != (std::size_t{1} << ground))
    throw DimensionMismatch("global distribution has the wrong size");
  ContextFamily f;
  f.ground = ground;
  for (const auto& vars : contexts) f.contexts.push_back({vars, marginal(global, vars)});
  validate(f);
  return f;
}

std::optional<bool> deterministic_assignment_exists(const ContextFamily& family) {
  validate(family);
  std::vector<std::size_t> forced;
  for (const auto& c : family.contexts) {
    if (!point_mass(c)) return std::nullopt;
    forced.push_back(
        static_cast<std::size_t>(std::find(c.dist.begin(), c.dist.end(), 1.0) - c.dist.begin()));
  }
  const std::uint64_t total = std::uint64_t{1} << family.ground;
  for (std::uint64_t g = 0; g < total; ++g) {
    bool ok = true;
    for (std::size_t k = 0; ok && k < family.contexts.size(); ++k)
      ok = restrict_assignment(g, family.contexts[k].vars) == forced[k];
    if (ok) return true;
  }
  return false;
}

ContextualityResult contextuality_check(const ContextFamily& family, Witness witness, double tol) {
  validate(family);
  std::set<std::size_t> covered_set;
  for (const auto& c : family.contexts) covered_set.insert(c.vars.begin(), c.vars.end());
  const std::vector<std::size_t> covered(covered_set.begin(), covered_set.end());

  // Atoms are assignments of the covered variables only; bit i ↔ covered[i].
  const std::size_t atoms = std::size_t{1} << covered.size();
  std::vector<std::size_t> slot(family.ground, 0);
  for (std::size_t i = 0; i < covered.size(); ++i) slot[covered[i]] = i;
  std::vector<lp::MarginalGroup> groups;
  for (const auto& c : family.contexts) {
    lp::MarginalGroup g{std::vector<std::size_t>(atoms), c.dist};
    std::vector<std::size_t> local(c.vars.size());
    for (std::size_t i = 0; i < c.vars.size(); ++i) local[i] = slot[c.vars[i]];
    for (std::uint64_t u = 0; u < atoms; ++u) g.label[u] = restrict_assignment(u, local);
    groups.push_back(std::move(g));
  }

  const auto sol = lp::solve_marginal_problem(atoms, groups, witness == Witness::max_entropy, tol);
  ContextualityResult out;
  out.max_marginal_error = sol.max_error;
  if (sol.feasible) {
    out.verdict = Verdict::feasible;
    const std::uint64_t total = std::uint64_t{1} << family.ground;
    const double spread = static_cast<double>(total / atoms);
    const std::vector<std::size_t> msb_first(covered.rbegin(), covered.rend());
    out.global.assign(total, 0.0);
    for (std::uint64_t g = 0; g < total; ++g)
      out.global[g] = sol.weights[restrict_assignment(g, msb_first)] / spread;
  } else {
    out.verdict = Verdict::contextual;
    Certificate cert;
    cert.reason = "no global distribution reproduces every context marginal";
    for (std::size_t k = 0; k < family.contexts.size(); ++k) {
      const auto& c = family.contexts[k];
      for (std::size_t o = 0; o < c.dist.size(); ++o)
        if (sol.farkas[k][o] != 0.0)
          cert.terms.push_back({"C" + std::to_string(k), outcome_label(o, c.vars.size()),
                                sol.farkas[k][o], c.dist[o]});
    }
    cert.normalization_coefficient = sol.farkas_normalization;
    cert.violation = sol.violation;
    cert.max_support = sol.max_support;
    out.certificate = std::move(cert);
  }

  if (auto exhaustive = deterministic_assignment_exists(family)) {
    out.deterministic = true;
    if (*exhaustive != (out.verdict == Verdict::feasible))
      throw InvariantViolation("contextuality_check: LP verdict disagrees with exhaustive assignment search");
    out.cross_checked = true;
  }
  return out;
}

FamilyClassifiers classifiers_from_contexts(const ContextFamily& family) {
  validate(family);
  FamilyClassifiers out;
  const auto& ctx = family.contexts;
  auto make = [&](const std::string& name, const std::vector<std::size_t>& vars,
                  const std::vector<double>& weight) {
    const std::size_t k = vars.size();
    std::vector<std::string> tokens, types;
    for (std::size_t o = 0; o < weight.size(); ++o) tokens.push_back(outcome_label(o, k));
    for (std::size_t v : vars) types.push_back(family.variable_name(v));
    types.push_back("w");
    Eigen::MatrixXd p(static_cast<Eigen::Index>(weight.size()), static_cast<Eigen::Index>(k + 1));
    for (std::size_t o = 0; o < weight.size(); ++o) {
      for (std::size_t i = 0; i < k; ++i)
        p(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) =
            static_cast<double>((o >> (k - 1 - i)) & 1U);
      p(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(k)) = weight[o];
    }
    return infolog::share(Classifier(name, std::move(tokens), std::move(types), std::move(p), k));
  };

  for (std::size_t c = 0; c < ctx.size(); ++c)
    out.base.push_back(make("C" + std::to_string(c), ctx[c].vars, ctx[c].dist));
  out.context_count = ctx.size();

  for (std::size_t c = 0; c < ctx.size(); ++c)
    for (std::size_t d = c + 1; d < ctx.size(); ++d) {
      std::vector<std::size_t> shared;
      for (std::size_t v : ctx[c].vars)
        if (std::find(ctx[d].vars.begin(), ctx[d].vars.end(), v) != ctx[d].vars.end())
          shared.push_back(v);
      if (shared.empty()) continue;
      std::sort(shared.begin(), shared.end());
      std::vector<double> w(std::size_t{1} << shared.size(), 0.0);
      for (std::size_t o = 0; o < ctx[c].dist.size(); ++o)
        w[project_outcome(o, ctx[c].vars, shared)] += ctx[c].dist[o];
      const std::size_t overlap = out.base.size();
      out.base.push_back(make("C" + std::to_string(c) + "&C" + std::to_string(d), shared, w));

      for (std::size_t side : {c, d}) {
        const auto& vars = ctx[side].vars;
        Infomorphism f{out.base[overlap], out.base[side], {}, {}};
        for (std::size_t v : shared)
          f.fwd.push_back(static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin()));
        f.fwd.push_back(vars.size());
        for (std::size_t o = 0; o < ctx[side].dist.size(); ++o)
          f.bwd.push_back(project_outcome(o, vars, shared));
        out.cross.push_back({overlap, side, std::move(f)});
      }
    }
  return out;
}

}  // namespace holo::cccd
