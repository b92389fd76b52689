#include "holoscreen/serialize.hpp"

#include <charconv>
#include <numbers>

#include "holoscreen/text_format.hpp"

namespace holo::io {
namespace {

Json vec3(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json strings(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

Json infomorphism_json(const infolog::Infomorphism& f) {
  Json fwd = Json::object(), bwd = Json::object();
  for (std::size_t a = 0; a < f.fwd.size(); ++a) fwd[f.source->types()[a]] = f.target->types()[f.fwd[a]];
  for (std::size_t b = 0; b < f.bwd.size(); ++b) bwd[f.target->tokens()[b]] = f.source->tokens()[f.bwd[b]];
  return Json{{"source", f.source->name()}, {"target", f.target->name()}, {"fwd", fwd}, {"bwd", bwd}};
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  const auto [ptr, ec] = std::to_chars(buf, buf + 16, v, 16);
  std::string s(buf, ptr);
  return std::string(16 - s.size(), '0') + s;
}

RunMeta RunMeta::make(std::string kind, std::string_view canonical_config, std::uint64_t seed) {
  return RunMeta{std::move(kind), hex64(fnv1a(canonical_config)), seed};
}

Json to_json(const RunMeta& m) {
  return Json{{"tool", kToolName},
              {"version", kToolVersion},
              {"kind", m.kind},
              {"config_digest", m.config_digest},
              {"seed", m.seed}};
}

std::string csv_header(const RunMeta& m) {
  return std::string("# ") + kToolName + " " + kToolVersion + " kind=" + m.kind +
         " config_digest=" + m.config_digest + " seed=" + std::to_string(m.seed) + "\n";
}

Json to_json(const screen::CycleRecord& c) {
  Json entries = Json::array();
  for (const auto& e : c.entries)
    entries.push_back(Json{{"phase", screen::name(e.phase)},
                           {"actor", screen::name(e.actor)},
                           {"qubit", e.qubit},
                           {"axis", vec3(e.axis)},
                           {"outcome", e.outcome},
                           {"eigen_contribution", e.eigen_contribution},
                           {"seed", e.seed}});
  Json eig = Json::array();
  for (double e : c.eigenvalues) eig.push_back(e);
  return Json{{"seed", c.seed},
              {"bits_a_to_b", c.bits_a_to_b},
              {"bits_b_to_a", c.bits_b_to_a},
              {"signed_ledger", c.signed_ledger()},
              {"eigenvalues", eig},
              {"entries", entries}};
}

Json to_json(const cccd::Certificate& c) {
  Json terms = Json::array();
  for (const auto& t : c.terms)
    terms.push_back(Json{{"classifier", t.classifier},
                         {"token", t.token},
                         {"coefficient", t.coefficient},
                         {"target", t.target}});
  return Json{{"reason", c.reason},
              {"normalization_coefficient", c.normalization_coefficient},
              {"violation", c.violation},
              {"max_support", c.max_support},
              {"terms", terms}};
}

Json to_json(const cccd::ContextualityResult& r, const cccd::ContextFamily& family) {
  Json j{{"verdict", cccd::name(r.verdict)},
         {"ground", family.ground},
         {"contexts", family.contexts.size()},
         {"deterministic", r.deterministic},
         {"cross_checked", r.cross_checked}};
  if (r.verdict == cccd::Verdict::feasible) {
    j["max_marginal_error"] = r.max_marginal_error;
    Json g = Json::array();
    for (double p : r.global) g.push_back(p);
    j["global"] = g;
  }
  if (r.certificate) j["certificate"] = to_json(*r.certificate);
  return j;
}

Json to_json(const infolog::Classifier& c) {
  Json rows = Json::array();
  for (std::size_t t = 0; t < c.token_count(); ++t) {
    Json row = Json::array();
    for (std::size_t j = 0; j < c.type_count(); ++j) row.push_back(c(t, j));
    rows.push_back(row);
  }
  Json j{{"name", c.name()}, {"tokens", strings(c.tokens())}, {"types", strings(c.types())}};
  if (auto w = c.weight_type()) j["weight"] = c.types()[*w];
  j["matrix"] = rows;
  return j;
}

Json to_json(const cccd::CCCDDiagram& d) {
  Json base = Json::array(), cross = Json::array(), cocone = Json::array();
  for (const auto& b : d.base) base.push_back(to_json(*b));
  for (const auto& g : d.cross) {
    Json m = infomorphism_json(g.map);
    m["from"] = g.from;
    m["to"] = g.to;
    cross.push_back(m);
  }
  for (const auto& f : d.cocone) cocone.push_back(infomorphism_json(f));
  Json j{{"base", base}, {"cross", cross}};
  j["core"] = d.core ? to_json(*d.core) : Json();
  j["cocone"] = cocone;
  j["inputs"] = d.inputs;
  j["claims"] = d.claims;
  if (d.output) j["output"] = Json{{"base", d.output->first}, {"type", d.base[d.output->first]->types()[d.output->second]}};
  return j;
}

Json to_json(const agent::UnderdeterminationWitness& w) {
  Json j{{"status", agent::name(w.status)},
         {"consistent_candidates", w.consistent_candidates},
         {"reason", w.reason}};
  if (w.diagrams) {
    j["first_truth_table"] = cccd::truth_table(w.diagrams->first);
    j["second_truth_table"] = cccd::truth_table(w.diagrams->second);
    j["first_layers"] = w.diagrams->first.base.size() - w.diagrams->first.arity();
    j["second_layers"] = w.diagrams->second.base.size() - w.diagrams->second.arity();
  }
  return j;
}

Json to_json(const infolog::ShieldReport& r, const infolog::CausalDag& dag, std::size_t x) {
  auto names = [&](const std::vector<std::size_t>& v) {
    Json a = Json::array();
    for (std::size_t i : v) a.push_back(dag.nodes()[i]);
    return a;
  };
  Json j{{"node", dag.nodes()[x]},
         {"mode", r.mode == infolog::ShieldMode::exact ? "exact" : "sampled"},
         {"shielded", r.shielded},
         {"max_deviation", r.max_deviation},
         {"blanket", names(r.blanket)},
         {"exterior", names(r.exterior)}};
  if (!r.shielded)
    j["leak"] = Json{{"blanket_values", r.leak_blanket_values},
                     {"x_value", r.leak_x_value},
                     {"exterior_values", r.leak_exterior_values}};
  return j;
}

Json to_json(const scatter::SMatrixd& s) {
  const auto m = s.dense();
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(row);
  }
  return Json{{"dim", s.dim()},
              {"qubits", s.qubits()},
              {"basis", s.basis_tag()},
              {"unitarity_deviation", s.unitarity_deviation()},
              {"entries", rows}};
}

std::string dump_artifact(const RunMeta& m, const Json& payload) {
  Json j{{"meta", to_json(m)}};
  for (const auto& [k, v] : payload.items()) j[k] = v;
  return j.dump(2) + "\n";
}

std::string sharing_csv(const RunMeta& m, const std::vector<agent::SharingRow>& rows) {
  std::string s = csv_header(m) + "cycle,S_bits,balance,ticks,orientation\n";
  for (const auto& r : rows)
    s += std::to_string(r.cycle) + "," + format_number(r.s_bits) + "," +
         format_number(static_cast<double>(r.balance_units) * std::numbers::ln2) + "," +
         std::to_string(r.ticks) + "," + agent::name(r.orientation) + "\n";
  return s;
}

std::string cycles_csv(const RunMeta& m, const std::vector<screen::CycleRecord>& cycles) {
  std::string s = csv_header(m) +
                  "cycle,phase,actor,qubit,axis_x,axis_y,axis_z,outcome,eigen_contribution,seed\n";
  for (std::size_t c = 0; c < cycles.size(); ++c)
    for (const auto& e : cycles[c].entries)
      s += std::to_string(c) + "," + screen::name(e.phase) + "," + screen::name(e.actor) + "," +
           std::to_string(e.qubit) + "," + format_number(e.axis.x()) + "," + format_number(e.axis.y()) + "," +
           format_number(e.axis.z()) + "," + std::to_string(e.outcome) + "," +
           format_number(e.eigen_contribution) + "," + std::to_string(e.seed) + "\n";
  return s;
}

}  // namespace holo::io
