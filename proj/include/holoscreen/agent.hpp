#pragma once

// Observers on the screen: sector maps, deployed reference frames, memory,
// entropic clocks and Landauer accounting. Also the two experiments run on
// agents: reference-frame sharing and the cloning attempt.

#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "holoscreen/cccd.hpp"
#include "holoscreen/errors.hpp"
#include "holoscreen/screen.hpp"

namespace holo::agent {

using screen::Party;

struct SectorMap {
  std::set<std::size_t> F;  ///< thermodynamic
  std::set<std::size_t> E;  ///< environment, containing R and P
  std::set<std::size_t> R;  ///< reference
  std::set<std::size_t> P;  ///< pointer
  std::set<std::size_t> Y;  ///< memory

  /// Sector by name ("F", "E", "R", "P", "Y"); throws ValidationError otherwise.
  const std::set<std::size_t>& operator[](const std::string& name) const;
};

struct SectorViolation {
  std::string rule;                  ///< e.g. "F ∩ E = ∅"
  std::vector<std::size_t> indices;  ///< offending qubits
};

/// Every broken sector rule for a screen of n qubits; empty when valid.
std::vector<SectorViolation> sector_violations(const SectorMap& map, std::size_t n);

class SectorError : public ValidationError {
 public:
  explicit SectorError(std::vector<SectorViolation> v);
  const std::vector<SectorViolation>& violations() const noexcept { return violations_; }

 private:
  std::vector<SectorViolation> violations_;
};

enum class Orientation { forward, reversed };
const char* name(Orientation o) noexcept;

struct EntropicClock {
  std::uint64_t ticks = 0;
  double period = 1.0;
  Orientation orientation = Orientation::forward;

  double elapsed() const noexcept { return static_cast<double>(ticks) * period; }
  void flip() noexcept {
    orientation = orientation == Orientation::forward ? Orientation::reversed : Orientation::forward;
  }
};

/// Free energy in integer units of ln 2 · k_B·T.
struct ThermoLedger {
  std::int64_t harvested = 0;
  std::int64_t debited = 0;

  std::int64_t balance_units() const noexcept { return harvested - debited; }
  double free_energy_in() const noexcept { return static_cast<double>(harvested) * std::numbers::ln2; }
  double landauer_debits() const noexcept { return static_cast<double>(debited) * std::numbers::ln2; }
  double balance() const noexcept { return static_cast<double>(balance_units()) * std::numbers::ln2; }
};

struct MemoryEntry {
  std::uint64_t tick;  ///< clock reading after the write
  std::vector<int> bits;
};

struct AgentState {
  Party id = Party::A;
  screen::LocalBasis basis;
  std::optional<SectorMap> sectors;
  std::map<std::string, cccd::CCCDDiagram> qrfs;
  std::set<std::size_t> input_roles;  ///< qubits read as QRF inputs
  EntropicClock clock;
  ThermoLedger ledger;
  std::vector<MemoryEntry> memory;
  std::uint64_t boundary_operations = 0;  ///< writes plus reads

  std::size_t screen_size() const noexcept { return basis.size(); }
};

/// Fresh agent with the default tick period h/(ln 2·T) unless given.
AgentState make_agent(Party id, screen::LocalBasis basis, double temperature,
                      std::optional<double> period = std::nullopt);

/// Throws SectorError listing every violated rule.
AgentState assign_sectors(AgentState agent, SectorMap map);

/// Attaches `d` to a sector. Unset claims default to the sector's qubits in
/// ascending order. Claims must be distinct screen qubits outside F and must
/// not meet the claims of another deployed frame, except that a frame on E
/// may share qubits with frames on R or P. Throws ValidationError on a
/// non-commuting diagram, an arity that differs from the sector size, or a
/// bad claim.
AgentState deploy_qrf(AgentState agent, const std::string& sector, cccd::CCCDDiagram d);

/// Appends (tick, bits) to memory at a cost of |bits| units, advances the
/// clock |bits| ticks and flips the orientation. Throws InsufficientFreeEnergy
/// when the balance cannot cover the write; the input state is untouched.
AgentState write_memory(AgentState agent, const std::vector<int>& bits);

/// Reads the boundary: flips the orientation, no cost, no ticks.
AgentState read_boundary(AgentState agent);

/// Credits |F| units for one completed cycle.
AgentState harvest(AgentState agent, const screen::CycleRecord& cycle);

/// Indices of E whose bit never changes across `history` (full-screen rows).
/// Throws ValidationError on fewer than two rows, ragged rows, or unassigned
/// sectors.
std::set<std::size_t> identify_system(const AgentState& agent,
                                      const std::vector<std::vector<int>>& history);

// ---------------------------------------------------------------------------
// Reference-frame sharing

struct SharingOptions {
  std::size_t qubits_a = 2;
  std::size_t qubits_b = 2;
  std::size_t shared = 1;     ///< qubit pairs coupled through the shared memory
  std::size_t cycles = 10;
  bool sync = true;
  double coupling = 1.0;      ///< controlled phase of coupling·π per pair
  std::uint64_t seed = 0;
};

struct SharingRow {
  std::size_t cycle;
  double s_bits;  ///< S(ρ_A)
  std::int64_t balance_units;
  std::uint64_t ticks;
  Orientation orientation;
};

/// Row 0 is the initial product state; one row per cycle after. While sync
/// holds, cycle c couples shared pair c−1 by Ry(π/2)⊗Ry(π/2) and then
/// CPhase(coupling·π); every qubit outside the uncoupled pairs gets a seeded
/// local rotation. Each cycle harvests `shared` units and, under sync,
/// writes `shared` bits. dim A·dim B
/// ≤ 2^12 and shared ≤ min(qubits_a, qubits_b), else CapacityExceeded or
/// ValidationError.
std::vector<SharingRow> qrf_sharing_experiment(const SharingOptions& opts);

/// Dimension form: dim_a and dim_b must be powers of two.
std::vector<SharingRow> qrf_sharing_experiment(std::size_t dim_a, std::size_t dim_b,
                                               std::size_t shared, std::size_t cycles, bool sync,
                                               std::uint64_t seed);

// ---------------------------------------------------------------------------
// Cloning attempt

struct Observation {
  std::vector<int> input;
  int output;
};

struct ScreenTrace {
  std::size_t arity = 0;
  std::vector<Observation> observations;
};

enum class CloneStatus { underdetermined, search_exhausted };
const char* name(CloneStatus s) noexcept;

struct UnderdeterminationWitness {
  CloneStatus status = CloneStatus::search_exhausted;
  std::optional<std::pair<cccd::CCCDDiagram, cccd::CCCDDiagram>> diagrams;
  std::size_t consistent_candidates = 0;  ///< size of the consistent part of the family
  std::string reason;
};

/// Searches flat and (when max_layers ≥ 2) layered truth-table diagrams for
/// two distinct ones consistent with every observation. Throws
/// ValidationError on malformed observations.
UnderdeterminationWitness attempt_qrf_clone(const ScreenTrace& trace, std::size_t max_layers = 2);

}  // namespace holo::agent
