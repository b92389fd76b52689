#pragma once

// The qubit-array boundary between two separable systems A and B: the
// interaction decomposition, the four-phase exchange cycle, and the
// area bound check.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "holoscreen/qcore.hpp"

namespace holo::screen {

enum class Party { A = 0, B = 1 };

constexpr std::size_t index(Party p) noexcept { return static_cast<std::size_t>(p); }
constexpr Party other(Party p) noexcept { return p == Party::A ? Party::B : Party::A; }
const char* name(Party p) noexcept;

/// H_AB = β_k·T·Σᵢ α^k_i M^k_i, k ∈ {A, B}, with k_B = 1.
struct InteractionSpec {
  std::size_t n = 0;
  std::array<std::vector<double>, 2> alpha;
  std::array<double, 2> beta{};
  double temperature = 1.0;

  const std::vector<double>& weights(Party k) const { return alpha[index(k)]; }
  double beta_of(Party k) const { return beta[index(k)]; }
};

/// Validates and returns the spec. Throws ValidationError on N < 1, a weight
/// outside [0,1], Σα ≠ 1, β < ln 2, or T ≤ 0.
InteractionSpec build_interaction(std::size_t n, std::vector<double> alpha_a,
                                  std::vector<double> alpha_b, double beta_a, double beta_b,
                                  double temperature);

/// Both agents share weights and efficiency.
InteractionSpec build_interaction(std::size_t n, const std::vector<double>& alpha, double beta,
                                  double temperature);

void validate(const InteractionSpec& spec);

/// E = β_k·T·Σᵢ α^k_i·s_i for spins s_i ∈ {−1, +1}.
double eigenvalue(const InteractionSpec& spec, Party k, std::span<const int> spins);

/// One agent's local z-axis per qubit.
class LocalBasis {
 public:
  LocalBasis() = default;
  explicit LocalBasis(std::vector<Eigen::Vector3d> axes);

  /// Every qubit measured along +z.
  static LocalBasis computational(std::size_t n);
  /// Every axis tilted by `angle` radians from +z toward +x.
  static LocalBasis tilted(std::size_t n, double angle);

  std::size_t size() const noexcept { return axes_.size(); }
  const Eigen::Vector3d& operator[](std::size_t i) const { return axes_[i]; }
  const std::vector<Eigen::Vector3d>& axes() const noexcept { return axes_; }

  /// Copy with qubit i's axis replaced.
  LocalBasis with_axis(std::size_t i, const Eigen::Vector3d& axis) const;

 private:
  std::vector<Eigen::Vector3d> axes_;
};

struct BasisChoice {
  LocalBasis a;
  LocalBasis b;
  const LocalBasis& of(Party k) const { return k == Party::A ? a : b; }
};

enum class Writer { none, A, B };

/// N non-interacting qubits held as Bloch vectors; the joint state is their
/// product by construction.
struct ScreenState {
  std::vector<Eigen::Vector3d> bloch;
  std::vector<Writer> last_writer;

  /// All qubits in |0⟩ (+z), unwritten.
  static ScreenState fresh(std::size_t n);

  std::size_t size() const noexcept { return bloch.size(); }

  /// ⊗ᵢ |q_i⟩ as a 2^N vector (N ≤ 12); qubit 0 is the most significant.
  qcore::StateVectord joint_state() const;
};

/// Pure single-qubit state for a Bloch vector (global phase fixed so the
/// |0⟩ amplitude is real and nonnegative).
qcore::CVectord qubit_state(const Eigen::Vector3d& bloch);

/// Overwrites qubit `q` with the eigenstate of spin `s` along the agent's axis.
void prepare(ScreenState& screen, Party actor, const LocalBasis& basis, std::size_t q, int spin);

/// Probability that `actor` reads +1 on qubit `q`: (1 + axis·r)/2.
double plus_probability(const ScreenState& screen, const LocalBasis& basis, std::size_t q);

/// Born-rule measurement with collapse onto the outcome eigenstate. The
/// uniform variate u ∈ [0,1) selects +1 iff u < P(+1).
int measure(ScreenState& screen, const LocalBasis& basis, std::size_t q, double u);

enum class Phase { b_prepare = 0, a_measure = 1, a_prepare = 2, b_measure = 3 };
const char* name(Phase p) noexcept;
constexpr Party actor_of(Phase p) noexcept {
  return p == Phase::b_prepare || p == Phase::b_measure ? Party::B : Party::A;
}

struct PhaseEntry {
  Phase phase;
  Party actor;
  std::size_t qubit;
  Eigen::Vector3d axis;
  int outcome;                 ///< spin prepared or measured, ±1
  double eigen_contribution;   ///< β_k·T·α^k_i·outcome
  std::uint64_t seed;
};

struct CycleRecord {
  std::uint64_t seed = 0;
  std::vector<PhaseEntry> entries;          ///< 4·N entries in phase order
  std::array<std::vector<int>, 4> spins;    ///< per phase
  std::array<double, 4> eigenvalues{};      ///< E of H_AB read or written per phase
  std::size_t bits_a_to_b = 0;
  std::size_t bits_b_to_a = 0;

  /// bits(A→B) − bits(B→A); zero for every completed cycle.
  long long signed_ledger() const noexcept {
    return static_cast<long long>(bits_a_to_b) - static_cast<long long>(bits_b_to_a);
  }
  const std::vector<int>& of(Phase p) const { return spins[static_cast<std::size_t>(p)]; }
};

/// A re-prepares exactly what it measured.
struct Echo {};
using PreparePolicy = std::variant<Echo, std::vector<int>>;

/// B prepares, A measures, A prepares, B measures. Measurement randomness is
/// drawn from CounterRng(seed, phase) at counter = qubit index.
CycleRecord exchange_cycle(ScreenState& screen, const InteractionSpec& spec,
                           const LocalBasis& basis_a, const LocalBasis& basis_b,
                           std::span<const int> b_prepares, const PreparePolicy& a_policy,
                           std::uint64_t seed);

/// Voxel embedding in Planck units (l_P = t_P = c = 1).
struct VoxelGeometry {
  double dx = 1.0;
  double dt = 1.0;
  double area = 0.0;

  /// area = N·(2·dx)².
  static VoxelGeometry for_cells(std::size_t n, double dx = 1.0, double dt = 1.0);
  /// Fixed surface area, independent of N.
  static VoxelGeometry with_area(double area, double dx = 1.0, double dt = 1.0);
};

struct BoundCheck {
  bool ok;
  double bound;    ///< area / 4
  double deficit;  ///< N − area/4 when violated, else 0
};

/// N ≤ A/4 with A in Planck units.
BoundCheck check_ghp_bound(const InteractionSpec& spec, const VoxelGeometry& geom);

}  // namespace holo::screen
