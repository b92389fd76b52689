#include <cstdint>
#include <map>

#include "holoscreen/agent.hpp"

namespace holo::agent {

const char* name(CloneStatus s) noexcept {
  return s == CloneStatus::underdetermined ? "UNDERDETERMINED" : "SEARCH_EXHAUSTED";
}

UnderdeterminationWitness attempt_qrf_clone(const ScreenTrace& trace, std::size_t max_layers) {
  const std::size_t k = trace.arity;
  if (k > 12) throw CapacityExceeded("attempt_qrf_clone: arity above 12");
  if (max_layers == 0) throw ValidationError("attempt_qrf_clone: at least one layer is required");
  const std::size_t rows = std::size_t{1} << k;

  UnderdeterminationWitness out;
  std::map<std::size_t, int> seen;
  for (const auto& obs : trace.observations) {
    if (obs.input.size() != k)
      throw ValidationError("observation has " + std::to_string(obs.input.size()) +
                            " input bits for arity " + std::to_string(k));
    if (obs.output != 0 && obs.output != 1) throw ValidationError("observed output must be 0 or 1");
    std::size_t x = 0;
    for (int b : obs.input) {
      if (b != 0 && b != 1) throw ValidationError("observed input bits must be 0 or 1");
      x = (x << 1) | static_cast<std::size_t>(b);
    }
    auto [it, fresh] = seen.emplace(x, obs.output);
    if (!fresh && it->second != obs.output) {
      out.reason = "trace is not a function: input " + cccd::outcome_label(x, k) +
                   " produced both outputs";
      return out;
    }
  }

  std::vector<int> table(rows, 0);
  std::vector<std::size_t> unobserved;
  for (std::size_t x = 0; x < rows; ++x) {
    if (auto it = seen.find(x); it != seen.end()) table[x] = it->second;
    else unobserved.push_back(x);
  }
  const std::size_t layouts = max_layers >= 2 ? 2 : 1;
  out.consistent_candidates =
      unobserved.size() >= 63 ? SIZE_MAX : (std::size_t{1} << unobserved.size()) * layouts;

  if (!unobserved.empty()) {
    std::vector<int> other = table;
    other[unobserved.front()] = 1;
    out.diagrams.emplace(cccd::qrf_diagram(k, table), cccd::qrf_diagram(k, other));
    out.reason = std::to_string(unobserved.size()) + " of " + std::to_string(rows) +
                 " inputs unobserved; completions differ on input " +
                 cccd::outcome_label(unobserved.front(), k);
  } else if (layouts == 2) {
    out.diagrams.emplace(cccd::qrf_diagram(k, table, false), cccd::qrf_diagram(k, table, true));
    out.reason = "every input observed; flat and layered realizations agree on the trace";
  } else {
    out.reason = "every input observed and only flat diagrams searched: the family holds one "
                 "consistent diagram";
    return out;
  }

  for (const auto* d : {&out.diagrams->first, &out.diagrams->second})
    for (const auto& obs : trace.observations)
      if (cccd::evaluate(*d, obs.input) != obs.output)
        throw InvariantViolation("attempt_qrf_clone: witness disagrees with the trace");
  out.status = CloneStatus::underdetermined;
  return out;
}

}  // namespace holo::agent
