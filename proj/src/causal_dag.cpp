#include <algorithm>
#include <cmath>
#include <set>

#include "holoscreen/infolog.hpp"
#include "holoscreen/rng.hpp"

namespace holo::infolog {

CausalDag::CausalDag(std::vector<std::string> nodes,
                     std::vector<std::pair<std::size_t, std::size_t>> edges,
                     std::vector<std::vector<std::array<double, 2>>> cpts)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), cpts_(std::move(cpts)) {
  const std::size_t n = nodes_.size();
  parents_.assign(n, {});
  children_.assign(n, {});
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [u, v] : edges_) {
    if (u >= n || v >= n) throw ValidationError("edge references an unknown node");
    if (u == v) throw ValidationError("self-loop on node " + nodes_[u]);
    if (!seen.insert({u, v}).second)
      throw ValidationError("duplicate edge " + nodes_[u] + " -> " + nodes_[v]);
    parents_[v].push_back(u);
    children_[u].push_back(v);
  }

  // Kahn's algorithm, smallest index first so the order is canonical.
  std::vector<std::size_t> indeg(n);
  for (std::size_t v = 0; v < n; ++v) indeg[v] = parents_[v].size();
  std::set<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.insert(v);
  while (!ready.empty()) {
    const std::size_t u = *ready.begin();
    ready.erase(ready.begin());
    order_.push_back(u);
    for (std::size_t c : children_[u])
      if (--indeg[c] == 0) ready.insert(c);
  }
  if (order_.size() != n) throw ValidationError("causal graph contains a cycle");

  if (cpts_.size() != n) throw ValidationError("one CPT per node required");
  const double tol = tolerances().normalization;
  for (std::size_t v = 0; v < n; ++v) {
    if (parents_[v].size() >= 63) throw CapacityExceeded("too many parents");
    const std::size_t rows = std::size_t{1} << parents_[v].size();
    if (cpts_[v].size() != rows)
      throw ValidationError("CPT of " + nodes_[v] + " has " + std::to_string(cpts_[v].size()) +
                            " rows, expected " + std::to_string(rows));
    for (const auto& row : cpts_[v]) {
      if (row[0] < 0.0 || row[1] < 0.0 || std::abs(row[0] + row[1] - 1.0) > tol)
        throw ValidationError("CPT row of " + nodes_[v] + " is not a distribution");
    }
  }
}

std::optional<std::size_t> CausalDag::node_index(const std::string& name) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

double CausalDag::conditional(std::size_t v, int value, std::uint64_t assignment) const {
  std::size_t row = 0;
  for (std::size_t p : parents_[v]) row = (row << 1) | ((assignment >> p) & 1U);
  return cpts_[v][row][value ? 1 : 0];
}

std::vector<double> CausalDag::joint() const {
  const std::size_t n = size();
  if (n > kMaxExactNodes)
    throw CapacityExceeded("exact joint over " + std::to_string(n) + " nodes exceeds cap of " +
                           std::to_string(kMaxExactNodes));
  std::vector<double> p(std::size_t{1} << n);
  for (std::uint64_t g = 0; g < p.size(); ++g) {
    double pr = 1.0;
    for (std::size_t v = 0; v < n && pr > 0.0; ++v) pr *= conditional(v, (g >> v) & 1U, g);
    p[g] = pr;
  }
  return p;
}

CausalDag make_dag(std::vector<std::string> nodes,
                   std::vector<std::pair<std::size_t, std::size_t>> edges) {
  std::vector<std::size_t> indeg(nodes.size(), 0);
  for (auto [u, v] : edges)
    if (v < indeg.size()) ++indeg[v];
  std::vector<std::vector<std::array<double, 2>>> cpts;
  for (std::size_t k : indeg) cpts.emplace_back(std::size_t{1} << k, std::array<double, 2>{0.5, 0.5});
  return CausalDag(std::move(nodes), std::move(edges), std::move(cpts));
}

std::vector<std::size_t> markov_blanket(const CausalDag& dag, std::size_t x) {
  if (x >= dag.size()) throw ValidationError("markov_blanket: unknown node");
  std::set<std::size_t> mb(dag.parents(x).begin(), dag.parents(x).end());
  for (std::size_t c : dag.children(x)) {
    mb.insert(c);
    for (std::size_t p : dag.parents(c)) mb.insert(p);
  }
  mb.erase(x);
  return {mb.begin(), mb.end()};
}

namespace {

std::uint64_t gather(std::uint64_t g, const std::vector<std::size_t>& nodes) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) out |= ((g >> nodes[i]) & 1U) << i;
  return out;
}

std::vector<int> unpack(std::uint64_t code, std::size_t width) {
  std::vector<int> v(width);
  for (std::size_t i = 0; i < width; ++i) v[i] = static_cast<int>((code >> i) & 1U);
  return v;
}

}  // namespace

ShieldReport blanket_shields(const CausalDag& dag, std::size_t x,
                             const std::vector<std::size_t>& blanket, ShieldMode mode,
                             const ShieldOptions& opts) {
  const std::size_t n = dag.size();
  if (x >= n) throw ValidationError("blanket_shields: unknown node");
  if (mode == ShieldMode::exact && n > kMaxExactNodes)
    throw CapacityExceeded("exact shielding check limited to " + std::to_string(kMaxExactNodes) +
                           " nodes");
  if (n > 63) throw CapacityExceeded("too many nodes");
  std::set<std::size_t> mb(blanket.begin(), blanket.end());
  for (std::size_t b : mb)
    if (b >= n) throw ValidationError("blanket references an unknown node");
  mb.erase(x);

  ShieldReport rep;
  rep.mode = mode;
  rep.blanket.assign(mb.begin(), mb.end());
  for (std::size_t v = 0; v < n; ++v)
    if (v != x && !mb.count(v)) rep.exterior.push_back(v);

  const std::size_t nm = std::size_t{1} << rep.blanket.size();
  const std::size_t ne = std::size_t{1} << rep.exterior.size();
  // mass[m][xv][e]: a probability (exact) or a count (sampled).
  std::vector<double> mass(nm * 2 * ne, 0.0);
  auto cell = [&](std::uint64_t m, int xv, std::uint64_t e) -> double& {
    return mass[(m * 2 + static_cast<std::uint64_t>(xv)) * ne + e];
  };

  if (mode == ShieldMode::exact) {
    const auto joint = dag.joint();
    for (std::uint64_t g = 0; g < joint.size(); ++g)
      cell(gather(g, rep.blanket), (g >> x) & 1U, gather(g, rep.exterior)) += joint[g];
  } else {
    CounterRng rng(opts.seed, 0x626c616e6b6574ULL);
    for (std::size_t s = 0; s < opts.samples; ++s) {
      std::uint64_t g = 0;
      for (std::size_t v : dag.topological_order())
        if (rng.uniform() < dag.conditional(v, 1, g)) g |= std::uint64_t{1} << v;
      cell(gather(g, rep.blanket), (g >> x) & 1U, gather(g, rep.exterior)) += 1.0;
    }
  }

  const double tol = mode == ShieldMode::exact ? tolerances().factorization : opts.sampled_tol;
  for (std::uint64_t m = 0; m < nm; ++m) {
    double pm = 0.0, px[2] = {0.0, 0.0};
    std::vector<double> pe(ne, 0.0);
    for (int xv = 0; xv < 2; ++xv)
      for (std::uint64_t e = 0; e < ne; ++e) {
        const double c = cell(m, xv, e);
        pm += c;
        px[xv] += c;
        pe[e] += c;
      }
    if (mode == ShieldMode::exact ? !(pm > 0.0)
                                  : pm < static_cast<double>(opts.min_cell_count))
      continue;
    for (int xv = 0; xv < 2; ++xv)
      for (std::uint64_t e = 0; e < ne; ++e) {
        const double dev = std::abs(cell(m, xv, e) / pm - (px[xv] / pm) * (pe[e] / pm));
        if (dev > rep.max_deviation) {
          rep.max_deviation = dev;
          if (dev > tol) {
            rep.leak_blanket_values = unpack(m, rep.blanket.size());
            rep.leak_x_value = xv;
            rep.leak_exterior_values = unpack(e, rep.exterior.size());
          }
        }
      }
  }
  rep.shielded = rep.max_deviation <= tol;
  return rep;
}

ShieldReport blanket_shields(const CausalDag& dag, std::size_t x, ShieldMode mode,
                             const ShieldOptions& opts) {
  return blanket_shields(dag, x, markov_blanket(dag, x), mode, opts);
}

}  // namespace holo::infolog
