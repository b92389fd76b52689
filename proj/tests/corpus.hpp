#pragma once

// Seeded generators shared by the unit tests and the acceptance suite.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "holoscreen/cccd.hpp"
#include "holoscreen/infolog.hpp"
#include "holoscreen/rng.hpp"

namespace corpus {

enum class FamilyKind { marginals, deterministic, prbox, independent };

struct GeneratedFamily {
  holo::cccd::ContextFamily family;
  FamilyKind kind;
};

inline std::vector<std::size_t> shuffled(holo::CounterRng& rng, std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  return v;
}

inline std::vector<std::size_t> random_vars(holo::CounterRng& rng, const std::vector<std::size_t>& pool,
                                            std::size_t max_size) {
  auto p = pool;
  for (std::size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  const std::size_t k = 1 + rng.below(std::min(max_size, p.size()));
  return {p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k)};
}

inline std::vector<double> random_distribution(holo::CounterRng& rng, std::size_t n, double sparsity = 0.0) {
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& v : p) {
    v = rng.uniform() < sparsity ? 0.0 : -std::log(1.0 - rng.uniform());
    total += v;
  }
  if (total == 0.0) {
    p[rng.below(n)] = 1.0;
    return p;
  }
  for (auto& v : p) v /= total;
  return p;
}

/// Family i of the corpus under `seed`: ground set of 2 to 12 variables and
/// 2 to 6 contexts of at most 3 variables. Kinds rotate with i.
inline GeneratedFamily random_family(std::uint64_t seed, std::size_t i) {
  using namespace holo::cccd;
  holo::CounterRng rng(seed, i);
  const std::size_t g = 2 + rng.below(11);
  auto kind = static_cast<FamilyKind>(i % 4);
  if (kind == FamilyKind::prbox && g < 4) kind = FamilyKind::marginals;
  std::vector<std::size_t> all(g);
  std::iota(all.begin(), all.end(), 0);
  const std::size_t contexts = 2 + rng.below(5);

  auto context_vars = [&](const std::vector<std::size_t>& pool) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t k = 0; k < contexts; ++k) out.push_back(random_vars(rng, pool, 3));
    return out;
  };

  ContextFamily f;
  f.ground = g;
  switch (kind) {
    case FamilyKind::marginals: {
      const auto global = random_distribution(rng, std::size_t{1} << g, 0.5);
      f = marginal_family(g, global, context_vars(all));
      break;
    }
    case FamilyKind::deterministic: {
      const std::uint64_t a = rng() & ((std::uint64_t{1} << g) - 1);
      for (const auto& vars : context_vars(all)) {
        Context c{vars, std::vector<double>(std::size_t{1} << vars.size(), 0.0)};
        c.dist[restrict_assignment(a, vars)] = 1.0;
        f.contexts.push_back(std::move(c));
      }
      if (rng.bernoulli(0.5)) {
        auto& c = f.contexts[rng.below(f.contexts.size())];
        const std::size_t o = static_cast<std::size_t>(std::find(c.dist.begin(), c.dist.end(), 1.0) - c.dist.begin());
        c.dist[o] = 0.0;
        c.dist[o ^ (1 + rng.below(c.dist.size() - 1))] = 1.0;
      }
      break;
    }
    case FamilyKind::prbox: {
      const auto order = shuffled(rng, g);
      const double lambda = rng.bernoulli(0.5) ? rng.uniform(0.3, 0.7) : rng.uniform(0.85, 1.0);
      const std::vector<std::size_t> rest(order.begin() + 4, order.end());
      if (!rest.empty()) {
        const auto global = random_distribution(rng, std::size_t{1} << g, 0.5);
        f = marginal_family(g, global, context_vars(rest));
      }
      const auto pr = prbox_family(lambda);
      for (const auto& c : pr.contexts) f.contexts.push_back({{order[c.vars[0]], order[c.vars[1]]}, c.dist});
      break;
    }
    case FamilyKind::independent:
      for (const auto& vars : context_vars(all))
        f.contexts.push_back({vars, random_distribution(rng, std::size_t{1} << vars.size())});
      break;
  }
  f.ground = g;
  return {std::move(f), kind};
}

/// DAG i under `seed`: 2 to `max_nodes` nodes, forward edges with
/// probability 0.35 and at most 3 parents, CPT entries in [0.05, 0.95].
inline holo::infolog::CausalDag random_dag(std::uint64_t seed, std::size_t i, std::size_t max_nodes = 10) {
  holo::CounterRng rng(seed, i);
  const std::size_t n = 2 + rng.below(max_nodes - 1);
  const auto order = shuffled(rng, n);
  std::vector<std::string> names;
  for (std::size_t v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (indeg[order[b]] < 3 && rng.bernoulli(0.35)) {
        edges.emplace_back(order[a], order[b]);
        ++indeg[order[b]];
      }
  std::vector<std::vector<std::array<double, 2>>> cpts(n);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t r = 0; r < (std::size_t{1} << indeg[v]); ++r) {
      const double p = rng.uniform(0.05, 0.95);
      cpts[v].push_back({1.0 - p, p});
    }
  return holo::infolog::CausalDag(names, edges, cpts);
}

}  // namespace corpus
