#include <algorithm>
#include <cmath>
#include <map>

#include "holoscreen/cccd.hpp"
#include "holoscreen/marginals.hpp"

namespace holo::cccd {

using infolog::verify_infomorphism;

std::vector<Infomorphism> CCCDDiagram::cone() const {
  std::vector<Infomorphism> h;
  h.reserve(cocone.size());
  for (const auto& f : cocone) h.push_back(infolog::dual(f));
  return h;
}

namespace {

bool same(const ClassifierRef& a, const ClassifierRef& b) { return a && b && (a == b || *a == *b); }

void check_shape(const CCCDDiagram& d) {
  if (!d.core) throw ValidationError("verify_cccd: diagram has no core");
  if (d.cocone.size() != d.base.size())
    throw ValidationError("verify_cccd: " + std::to_string(d.cocone.size()) + " cocone legs for " +
                          std::to_string(d.base.size()) + " base classifiers");
  for (std::size_t j = 0; j < d.base.size(); ++j)
    if (!same(d.cocone[j].source, d.base[j]) || !same(d.cocone[j].target, d.core))
      throw ValidationError("verify_cccd: cocone leg " + std::to_string(j) +
                            " does not run from its base classifier to the core");
  for (std::size_t k = 0; k < d.cross.size(); ++k) {
    const auto& g = d.cross[k];
    if (g.from >= d.base.size() || g.to >= d.base.size() || !same(g.map.source, d.base[g.from]) ||
        !same(g.map.target, d.base[g.to]))
      throw ValidationError("verify_cccd: cross map " + std::to_string(k) +
                            " does not match its endpoints");
  }
}

std::string label(const CCCDDiagram& d, const CrossMap& g) {
  return d.base[g.from]->name() + "->" + d.base[g.to]->name();
}

}  // namespace

CccdCheck verify_cccd(const CCCDDiagram& d, double tol) {
  check_shape(d);
  CccdCheck out;
  auto note = [&](std::string where, double dev, bool failed) {
    out.max_deviation = std::max(out.max_deviation, dev);
    if (failed) {
      out.commutes = false;
      out.violations.push_back({std::move(where), dev});
    }
  };
  auto leg = [&](const std::string& where, const Infomorphism& f) {
    const auto c = verify_infomorphism(f, tol);
    note(where, c.max_deviation, !c.valid);
  };

  for (const auto& g : d.cross) leg("cross " + label(d, g), g.map);
  const auto cone = d.cone();
  for (std::size_t j = 0; j < d.base.size(); ++j) {
    leg("cocone f[" + d.base[j]->name() + "]", d.cocone[j]);
    leg("cone h[" + d.base[j]->name() + "]", cone[j]);
  }

  // f_to ∘ g against f_from: the same core token must project to the same
  // source token, and the two routes for each type must classify every core
  // token alike.
  const Classifier& core = *d.core;
  for (const auto& g : d.cross) {
    const auto& f_from = d.cocone[g.from];
    const auto& f_to = d.cocone[g.to];
    const std::string where = "path " + label(d, g);
    bool tokens_agree = true;
    for (std::size_t t = 0; t < core.token_count(); ++t)
      tokens_agree = tokens_agree && g.map.bwd[f_to.bwd[t]] == f_from.bwd[t];
    if (!tokens_agree) note(where + " tokens", 1.0, true);

    double dev = 0.0;
    bool exact_mismatch = false;
    const bool exact = core.is_binary();
    for (std::size_t a = 0; a < g.map.fwd.size(); ++a) {
      const std::size_t via = f_to.fwd[g.map.fwd[a]];
      const std::size_t direct = f_from.fwd[a];
      if (via == direct) continue;
      for (std::size_t t = 0; t < core.token_count(); ++t) {
        const double e = std::abs(core(t, via) - core(t, direct));
        dev = std::max(dev, e);
        exact_mismatch = exact_mismatch || e != 0.0;
      }
    }
    note(where + " types", dev, exact ? exact_mismatch : dev > tol);

    leg("composite " + where, infolog::compose(g.map, f_to));
    leg("dual composite " + where, infolog::compose(cone[g.to], infolog::dual(g.map)));
  }
  return out;
}

namespace {

/// Visits classifiers so that each one, where possible, is linked by a cross
/// map to one already placed; ties go to the smaller token set.
std::vector<std::size_t> search_order(const std::vector<ClassifierRef>& base,
                                      const std::vector<CrossMap>& cross) {
  const std::size_t n = base.size();
  std::vector<bool> placed(n, false);
  std::vector<std::size_t> order;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    std::size_t best_links = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (placed[k]) continue;
      std::size_t links = 0;
      for (const auto& g : cross)
        if ((g.from == k && placed[g.to]) || (g.to == k && placed[g.from])) ++links;
      if (best == n || links > best_links ||
          (links == best_links && base[k]->token_count() < base[best]->token_count())) {
        best = k;
        best_links = links;
      }
    }
    placed[best] = true;
    order.push_back(best);
  }
  return order;
}

std::vector<std::vector<std::size_t>> compatible_tuples(const std::vector<ClassifierRef>& base,
                                                        const std::vector<CrossMap>& cross) {
  const std::size_t n = base.size();
  const auto order = search_order(base, cross);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> tuple(n, 0);
  std::vector<bool> assigned(n, false);

  auto consistent = [&](std::size_t k) {
    for (const auto& g : cross) {
      if (g.from != k && g.to != k) continue;
      if (assigned[g.from] && assigned[g.to] && g.map.bwd[tuple[g.to]] != tuple[g.from]) return false;
    }
    return true;
  };

  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == n) {
      if (out.size() >= kMaxCoreTokens)
        throw CapacityExceeded("core exceeds " + std::to_string(kMaxCoreTokens) + " tokens");
      out.push_back(tuple);
      return;
    }
    const std::size_t k = order[depth];
    std::optional<std::size_t> forced;
    for (const auto& g : cross)
      if (g.from == k && assigned[g.to]) {
        forced = g.map.bwd[tuple[g.to]];
        break;
      }
    const std::size_t lo = forced ? *forced : 0;
    const std::size_t hi = forced ? *forced + 1 : base[k]->token_count();
    assigned[k] = true;
    for (std::size_t t = lo; t < hi; ++t) {
      tuple[k] = t;
      if (consistent(k)) self(self, depth + 1);
    }
    assigned[k] = false;
  };
  recurse(recurse, 0);
  return out;
}

}  // namespace

BuildCoreResult build_core(const std::vector<ClassifierRef>& base, const std::vector<CrossMap>& cross,
                           double tol) {
  if (base.empty()) throw ValidationError("build_core: no base classifiers");
  for (const auto& c : base)
    if (!c) throw ValidationError("build_core: null base classifier");
  for (std::size_t k = 0; k < cross.size(); ++k) {
    const auto& g = cross[k];
    if (g.from >= base.size() || g.to >= base.size() || !same(g.map.source, base[g.from]) ||
        !same(g.map.target, base[g.to]))
      throw ValidationError("build_core: cross map " + std::to_string(k) +
                            " does not match its endpoints");
    const auto check = verify_infomorphism(g.map, tol);
    if (!check.valid)
      throw ValidationError("build_core: cross map " + base[g.from]->name() + "->" +
                            base[g.to]->name() + " is not an infomorphism (deviation " +
                            std::to_string(check.max_deviation) + ")");
  }

  BuildCoreResult out;
  if (base.size() == 1 && cross.empty()) {
    const Classifier& b = *base.front();
    auto core = infolog::share(Classifier("core", b.tokens(), b.types(), b.matrix(), b.weight_type()));
    Infomorphism f = infolog::identity(base.front());
    f.target = core;
    out.diagram = CCCDDiagram{base, cross, core, {std::move(f)}, {}, {}, std::nullopt};
    out.max_entropy = true;
    return out;
  }

  const auto tuples = compatible_tuples(base, cross);
  if (tuples.empty()) {
    out.verdict = Verdict::contextual;
    Certificate cert;
    cert.reason = "no tuple of base tokens is related by every cross map";
    cert.normalization_coefficient = 1.0;
    cert.violation = 1.0;
    out.certificate = std::move(cert);
    return out;
  }

  std::vector<lp::MarginalGroup> groups;
  std::vector<std::size_t> weighted;
  for (std::size_t j = 0; j < base.size(); ++j) {
    const auto w = base[j]->weight_type();
    if (!w) continue;
    weighted.push_back(j);
    lp::MarginalGroup g;
    g.label.reserve(tuples.size());
    for (const auto& t : tuples) g.label.push_back(t[j]);
    for (std::size_t a = 0; a < base[j]->token_count(); ++a) g.target.push_back((*base[j])(a, *w));
    groups.push_back(std::move(g));
  }

  std::vector<double> joint;
  if (!weighted.empty()) {
    double total_tol = tolerances().marginal;
    const auto sol = lp::solve_marginal_problem(tuples.size(), groups, true, total_tol);
    if (!sol.feasible) {
      out.verdict = Verdict::contextual;
      Certificate cert;
      cert.reason = "no joint weight on the compatible tuples marginalizes onto every base weight";
      for (std::size_t k = 0; k < weighted.size(); ++k) {
        const Classifier& b = *base[weighted[k]];
        for (std::size_t a = 0; a < b.token_count(); ++a)
          if (sol.farkas[k][a] != 0.0)
            cert.terms.push_back({b.name(), b.tokens()[a], sol.farkas[k][a], groups[k].target[a]});
      }
      cert.normalization_coefficient = sol.farkas_normalization;
      cert.violation = sol.violation;
      cert.max_support = sol.max_support;
      out.certificate = std::move(cert);
      return out;
    }
    joint = sol.weights;
    out.max_entropy = sol.max_entropy;
  }

  std::vector<std::string> tokens;
  tokens.reserve(tuples.size());
  for (const auto& t : tuples) {
    std::string name;
    for (std::size_t j = 0; j < base.size(); ++j) {
      if (j) name += '|';
      name += base[j]->tokens()[t[j]];
    }
    tokens.push_back(std::move(name));
  }

  std::vector<std::string> types;
  std::vector<std::vector<std::size_t>> fwd(base.size());
  for (std::size_t j = 0; j < base.size(); ++j) {
    fwd[j].assign(base[j]->type_count(), 0);
    for (std::size_t a = 0; a < base[j]->type_count(); ++a) {
      if (base[j]->is_weight(a)) continue;
      fwd[j][a] = types.size();
      types.push_back(base[j]->name() + "." + base[j]->types()[a]);
    }
  }
  std::optional<std::size_t> joint_type;
  if (!weighted.empty()) {
    joint_type = types.size();
    types.push_back("joint");
    for (std::size_t j : weighted) fwd[j][*base[j]->weight_type()] = *joint_type;
  }

  Eigen::MatrixXd p(static_cast<Eigen::Index>(tuples.size()), static_cast<Eigen::Index>(types.size()));
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const auto r = static_cast<Eigen::Index>(t);
    for (std::size_t j = 0; j < base.size(); ++j)
      for (std::size_t a = 0; a < base[j]->type_count(); ++a)
        if (!base[j]->is_weight(a))
          p(r, static_cast<Eigen::Index>(fwd[j][a])) = (*base[j])(tuples[t][j], a);
    if (joint_type) p(r, static_cast<Eigen::Index>(*joint_type)) = std::clamp(joint[t], 0.0, 1.0);
  }
  auto core = infolog::share(Classifier("core", std::move(tokens), std::move(types), std::move(p), joint_type));

  CCCDDiagram d{base, cross, core, {}, {}, {}, std::nullopt};
  for (std::size_t j = 0; j < base.size(); ++j) {
    Infomorphism f{base[j], core, fwd[j], {}};
    f.bwd.reserve(tuples.size());
    for (const auto& t : tuples) f.bwd.push_back(t[j]);
    d.cocone.push_back(std::move(f));
  }
  out.diagram = std::move(d);
  return out;
}

std::optional<Infomorphism> mediating_infomorphism(const CCCDDiagram& d, const ClassifierRef& candidate,
                                                   const std::vector<Infomorphism>& legs, double tol) {
  check_shape(d);
  if (!candidate) throw ValidationError("mediating_infomorphism: null candidate");
  if (legs.size() != d.base.size())
    throw ValidationError("mediating_infomorphism: one candidate leg per base classifier required");
  for (std::size_t j = 0; j < legs.size(); ++j)
    if (!same(legs[j].source, d.base[j]) || !same(legs[j].target, candidate))
      throw ValidationError("mediating_infomorphism: candidate leg " + std::to_string(j) +
                            " has the wrong endpoints");

  const Classifier& core = *d.core;
  Infomorphism u{d.core, candidate, std::vector<std::size_t>(core.type_count()), {}};
  std::vector<bool> set(core.type_count(), false);
  for (std::size_t j = 0; j < legs.size(); ++j)
    for (std::size_t a = 0; a < legs[j].fwd.size(); ++a) {
      const std::size_t ct = d.cocone[j].fwd[a];
      if (set[ct] && u.fwd[ct] != legs[j].fwd[a]) return std::nullopt;
      u.fwd[ct] = legs[j].fwd[a];
      set[ct] = true;
    }
  if (std::find(set.begin(), set.end(), false) != set.end()) return std::nullopt;

  std::map<std::vector<std::size_t>, std::size_t> by_tuple;
  for (std::size_t t = 0; t < core.token_count(); ++t) {
    std::vector<std::size_t> key;
    for (const auto& f : d.cocone) key.push_back(f.bwd[t]);
    by_tuple.emplace(std::move(key), t);
  }
  for (std::size_t c = 0; c < candidate->token_count(); ++c) {
    std::vector<std::size_t> key;
    for (const auto& k : legs) key.push_back(k.bwd[c]);
    auto it = by_tuple.find(key);
    if (it == by_tuple.end()) return std::nullopt;
    u.bwd.push_back(it->second);
  }
  if (!verify_infomorphism(u, tol).valid) return std::nullopt;
  return u;
}

// ---------------------------------------------------------------------------
// Boolean QRF diagrams

namespace {

ClassifierRef bit_classifier(const std::string& name, const std::string& type) {
  Eigen::MatrixXd p(2, 1);
  p << 0.0, 1.0;
  return infolog::share(Classifier(name, {"0", "1"}, {type}, std::move(p)));
}

}  // namespace

CCCDDiagram qrf_diagram(std::size_t arity, const std::vector<int>& table, bool layered) {
  if (arity > 12) throw CapacityExceeded("qrf_diagram: arity above 12");
  const std::size_t rows = std::size_t{1} << arity;
  if (table.size() != rows)
    throw ValidationError("qrf_diagram: truth table needs " + std::to_string(rows) + " entries");
  for (int v : table)
    if (v != 0 && v != 1) throw ValidationError("qrf_diagram: truth table entries must be 0 or 1");

  CCCDDiagram d;
  std::vector<std::string> types;
  for (std::size_t i = 0; i < arity; ++i) {
    d.base.push_back(bit_classifier("in" + std::to_string(i), "q" + std::to_string(i)));
    d.inputs.push_back(i);
    types.push_back("q" + std::to_string(i));
  }
  if (layered) {
    d.base.push_back(bit_classifier("hidden", "h"));
    types.push_back("h");
  }
  d.base.push_back(bit_classifier("out", "y"));
  types.push_back("y");
  const std::size_t out_index = d.base.size() - 1;
  d.output = std::make_pair(out_index, std::size_t{0});

  std::vector<std::string> tokens;
  Eigen::MatrixXd p(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(types.size()));
  for (std::size_t x = 0; x < rows; ++x) {
    tokens.push_back(outcome_label(x, arity));
    const auto r = static_cast<Eigen::Index>(x);
    for (std::size_t i = 0; i < arity; ++i)
      p(r, static_cast<Eigen::Index>(i)) = static_cast<double>((x >> (arity - 1 - i)) & 1U);
    for (std::size_t c = arity; c < types.size(); ++c)
      p(r, static_cast<Eigen::Index>(c)) = table[x];
  }
  if (arity == 0) tokens = {"*"};
  d.core = infolog::share(Classifier(layered ? "core-layered" : "core", std::move(tokens),
                                     std::move(types), std::move(p)));

  for (std::size_t j = 0; j < d.base.size(); ++j) {
    Infomorphism f{d.base[j], d.core, {j}, {}};
    for (std::size_t x = 0; x < rows; ++x)
      f.bwd.push_back(j < arity ? (x >> (arity - 1 - j)) & 1U : static_cast<std::size_t>(table[x]));
    d.cocone.push_back(std::move(f));
  }
  if (layered) {
    Infomorphism g{d.base[out_index], d.base[arity], {0}, {0, 1}};
    d.cross.push_back({out_index, arity, std::move(g)});
  }
  return d;
}

int evaluate(const CCCDDiagram& d, const std::vector<int>& input_bits) {
  if (!d.core || !d.output) throw ValidationError("evaluate: diagram has no core or no output");
  if (input_bits.size() != d.arity())
    throw DimensionMismatch("evaluate: " + std::to_string(input_bits.size()) + " bits for arity " +
                            std::to_string(d.arity()));
  const Classifier& core = *d.core;
  const std::size_t out_col = d.cocone.at(d.output->first).fwd.at(d.output->second);
  for (std::size_t t = 0; t < core.token_count(); ++t) {
    bool match = true;
    for (std::size_t i = 0; match && i < d.arity(); ++i) {
      const std::size_t col = d.cocone.at(d.inputs[i]).fwd.at(0);
      match = (core(t, col) >= 0.5 ? 1 : 0) == input_bits[i];
    }
    if (match) return core(t, out_col) >= 0.5 ? 1 : 0;
  }
  throw ValidationError("evaluate: no core token matches the input");
}

std::vector<int> truth_table(const CCCDDiagram& d) {
  const std::size_t k = d.arity();
  std::vector<int> table;
  for (std::size_t x = 0; x < (std::size_t{1} << k); ++x) {
    std::vector<int> bits(k);
    for (std::size_t i = 0; i < k; ++i) bits[i] = static_cast<int>((x >> (k - 1 - i)) & 1U);
    table.push_back(evaluate(d, bits));
  }
  return table;
}

}  // namespace holo::cccd
