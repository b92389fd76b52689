#include "holoscreen/agent.hpp"

#include <algorithm>
#include <iterator>

#include "holoscreen/units.hpp"

namespace holo::agent {
namespace {

std::vector<std::size_t> meet(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::size_t> minus(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string describe(const std::vector<SectorViolation>& v) {
  std::string s = "invalid sector map:";
  for (const auto& x : v) {
    s += " [" + x.rule + " at";
    for (std::size_t i : x.indices) s += " " + std::to_string(i);
    s += "]";
  }
  return s;
}

bool nested(const std::string& a, const std::string& b) {
  return (a == "E" && (b == "R" || b == "P")) || (b == "E" && (a == "R" || a == "P"));
}

}  // namespace

const std::set<std::size_t>& SectorMap::operator[](const std::string& name) const {
  if (name == "F") return F;
  if (name == "E") return E;
  if (name == "R") return R;
  if (name == "P") return P;
  if (name == "Y") return Y;
  throw ValidationError("unknown sector " + name);
}

SectorError::SectorError(std::vector<SectorViolation> v)
    : ValidationError(describe(v)), violations_(std::move(v)) {}

const char* name(Orientation o) noexcept { return o == Orientation::forward ? "forward" : "reversed"; }

std::vector<SectorViolation> sector_violations(const SectorMap& map, std::size_t n) {
  std::vector<SectorViolation> out;
  for (const char* s : {"F", "E", "R", "P", "Y"}) {
    std::vector<std::size_t> bad;
    for (std::size_t i : map[s])
      if (i >= n) bad.push_back(i);
    if (!bad.empty()) out.push_back({std::string(s) + " ⊆ [0, N)", bad});
  }
  auto disjoint = [&](const std::set<std::size_t>& a, const std::set<std::size_t>& b, std::string rule) {
    if (auto m = meet(a, b); !m.empty()) out.push_back({std::move(rule), std::move(m)});
  };
  disjoint(map.F, map.E, "F ∩ E = ∅");
  disjoint(map.F, map.Y, "F ∩ Y = ∅");
  disjoint(map.E, map.Y, "E ∩ Y = ∅");
  if (auto m = minus(map.R, map.E); !m.empty()) out.push_back({"R ⊆ E", std::move(m)});
  if (auto m = minus(map.P, map.E); !m.empty()) out.push_back({"P ⊆ E", std::move(m)});
  disjoint(map.R, map.P, "R ∩ P = ∅");
  return out;
}

AgentState make_agent(Party id, screen::LocalBasis basis, double temperature,
                      std::optional<double> period) {
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  AgentState a;
  a.id = id;
  a.basis = std::move(basis);
  a.clock.period = period ? *period : tick_period(temperature);
  if (!(a.clock.period > 0.0)) throw ValidationError("tick period must be positive");
  return a;
}

AgentState assign_sectors(AgentState agent, SectorMap map) {
  if (auto v = sector_violations(map, agent.screen_size()); !v.empty()) throw SectorError(std::move(v));
  agent.sectors = std::move(map);
  agent.qrfs.clear();
  agent.input_roles.clear();
  return agent;
}

AgentState deploy_qrf(AgentState agent, const std::string& sector, cccd::CCCDDiagram d) {
  if (!agent.sectors) throw ValidationError("deploy_qrf: sectors not assigned");
  const auto& target = (*agent.sectors)[sector];
  if (d.arity() != target.size())
    throw ValidationError("deploy_qrf: diagram has arity " + std::to_string(d.arity()) +
                          " but sector " + sector + " has " + std::to_string(target.size()) +
                          " qubits");
  const auto check = cccd::verify_cccd(d);
  if (!check.commutes)
    throw ValidationError("deploy_qrf: diagram does not commute (" +
                          check.violations.front().where + ")");

  if (d.claims.empty()) d.claims.assign(target.begin(), target.end());
  if (d.claims.size() != d.arity())
    throw ValidationError("deploy_qrf: one claimed qubit per input required");
  const std::set<std::size_t> claims(d.claims.begin(), d.claims.end());
  if (claims.size() != d.claims.size()) throw ValidationError("deploy_qrf: repeated claim");
  for (std::size_t q : claims) {
    if (q >= agent.screen_size())
      throw ValidationError("deploy_qrf: claim " + std::to_string(q) + " is off the screen");
    if (agent.sectors->F.count(q))
      throw ValidationError("deploy_qrf: claim " + std::to_string(q) +
                            " lies in the thermodynamic sector");
  }
  for (const auto& [other, frame] : agent.qrfs) {
    if (other == sector || nested(other, sector)) continue;
    const std::set<std::size_t> theirs(frame.claims.begin(), frame.claims.end());
    if (auto m = meet(claims, theirs); !m.empty())
      throw ValidationError("deploy_qrf: frames on " + other + " and " + sector +
                            " both claim qubit " + std::to_string(m.front()));
  }

  agent.qrfs.insert_or_assign(sector, std::move(d));
  agent.input_roles.clear();
  for (const auto& [s, frame] : agent.qrfs) agent.input_roles.insert(frame.claims.begin(), frame.claims.end());
  return agent;
}

AgentState write_memory(AgentState agent, const std::vector<int>& bits) {
  if (bits.empty()) throw ValidationError("write_memory: nothing to write");
  for (int b : bits)
    if (b != 0 && b != 1) throw ValidationError("write_memory: bits must be 0 or 1");
  const auto cost = static_cast<std::int64_t>(bits.size());
  if (agent.ledger.balance_units() < cost)
    throw InsufficientFreeEnergy("write_memory: " + std::to_string(cost) + " bits need " +
                                 std::to_string(cost) + " ln2 but the balance is " +
                                 std::to_string(agent.ledger.balance_units()) + " ln2");
  agent.ledger.debited += cost;
  agent.clock.ticks += bits.size();
  agent.clock.flip();
  ++agent.boundary_operations;
  agent.memory.push_back({agent.clock.ticks, bits});
  return agent;
}

AgentState read_boundary(AgentState agent) {
  agent.clock.flip();
  ++agent.boundary_operations;
  return agent;
}

AgentState harvest(AgentState agent, const screen::CycleRecord& cycle) {
  if (!agent.sectors) throw ValidationError("harvest: sectors not assigned");
  if (cycle.bits_a_to_b != agent.screen_size() || cycle.bits_b_to_a != agent.screen_size())
    throw ValidationError("harvest: cycle record is not a completed cycle on this screen");
  agent.ledger.harvested += static_cast<std::int64_t>(agent.sectors->F.size());
  return agent;
}

std::set<std::size_t> identify_system(const AgentState& agent,
                                      const std::vector<std::vector<int>>& history) {
  if (!agent.sectors) throw ValidationError("identify_system: sectors not assigned");
  if (history.empty()) throw ValidationError("identify_system: empty history");
  if (history.size() < 2) throw ValidationError("identify_system: needs at least two rows");
  for (const auto& row : history)
    if (row.size() != agent.screen_size())
      throw ValidationError("identify_system: row has " + std::to_string(row.size()) +
                            " bits for a screen of " + std::to_string(agent.screen_size()));
  std::set<std::size_t> out;
  for (std::size_t i : agent.sectors->E) {
    const int first = history.front()[i];
    if (std::all_of(history.begin(), history.end(), [&](const auto& r) { return r[i] == first; }))
      out.insert(i);
  }
  return out;
}

}  // namespace holo::agent
