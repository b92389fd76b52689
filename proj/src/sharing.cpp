#include <bit>
#include <numbers>

#include "holoscreen/agent.hpp"
#include "holoscreen/qcore.hpp"
#include "holoscreen/rng.hpp"

namespace holo::agent {
namespace {

using qcore::CMatrixd;
using qcore::CVectord;
using qcore::Gatesd;

// Qubit 0 is the most significant bit of the amplitude index.
void apply_1q(CVectord& psi, std::size_t n, std::size_t q, const CMatrixd& u) {
  const Eigen::Index stride = Eigen::Index{1} << (n - 1 - q);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (i & stride) continue;
    const auto a0 = psi(i), a1 = psi(i + stride);
    psi(i) = u(0, 0) * a0 + u(0, 1) * a1;
    psi(i + stride) = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void apply_cphase(CVectord& psi, std::size_t n, std::size_t q1, std::size_t q2, double phi) {
  const Eigen::Index m1 = Eigen::Index{1} << (n - 1 - q1);
  const Eigen::Index m2 = Eigen::Index{1} << (n - 1 - q2);
  const auto phase = std::polar(1.0, phi);
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    if ((i & m1) && (i & m2)) psi(i) *= phase;
}

}  // namespace

std::vector<SharingRow> qrf_sharing_experiment(const SharingOptions& o) {
  const std::size_t n = o.qubits_a + o.qubits_b;
  if (o.qubits_a == 0 || o.qubits_b == 0) throw ValidationError("both agents need at least one qubit");
  if (n > 12) throw CapacityExceeded("joint dimension 2^" + std::to_string(n) + " exceeds 2^12");
  if (o.shared > std::min(o.qubits_a, o.qubits_b))
    throw ValidationError("shared sector of " + std::to_string(o.shared) +
                          " pairs exceeds the smaller agent");
  if (!(o.coupling >= 0.0 && o.coupling <= 1.0)) throw ValidationError("coupling outside [0,1]");

  const qcore::BipartiteSplit split{std::size_t{1} << o.qubits_a, std::size_t{1} << o.qubits_b};
  CVectord psi = CVectord::Zero(static_cast<Eigen::Index>(split.dim()));
  psi(0) = 1.0;
  auto entropy = [&] {
    return qcore::entanglement_entropy(qcore::StateVectord(psi, qcore::detail::Trusted{}), split);
  };

  ThermoLedger ledger;
  EntropicClock clock;
  std::vector<SharingRow> rows;
  rows.push_back({0, entropy(), 0, 0, Orientation::forward});
  const CMatrixd update = Gatesd::ry(std::numbers::pi / 2);

  // Cycle c couples pair c−1 while its qubits are still fresh; local
  // rotations afterwards leave the A|B entanglement unchanged.
  std::size_t coupled = 0;
  auto pair_of = [&](std::size_t q) { return q < o.qubits_a ? q : q - o.qubits_a; };
  for (std::size_t c = 1; c <= o.cycles; ++c) {
    if (o.sync && coupled < o.shared) {
      apply_1q(psi, n, coupled, update);
      apply_1q(psi, n, o.qubits_a + coupled, update);
      apply_cphase(psi, n, coupled, o.qubits_a + coupled, o.coupling * std::numbers::pi);
      ++coupled;
    }
    CounterRng rng(o.seed, c);
    for (std::size_t q = 0; q < n; ++q) {
      if (pair_of(q) < o.shared && pair_of(q) >= coupled) continue;
      const double a = rng.uniform(0.0, 2 * std::numbers::pi);
      const double b = rng.uniform(0.0, 2 * std::numbers::pi);
      const double g = rng.uniform(0.0, 2 * std::numbers::pi);
      apply_1q(psi, n, q, Gatesd::rz(a) * Gatesd::ry(b) * Gatesd::rz(g));
    }
    psi.normalize();

    ledger.harvested += static_cast<std::int64_t>(o.shared);
    if (o.sync && o.shared > 0) {
      ledger.debited += static_cast<std::int64_t>(o.shared);
      clock.ticks += o.shared;
      clock.flip();
    }
    rows.push_back({c, entropy(), ledger.balance_units(), clock.ticks, clock.orientation});
  }
  return rows;
}

std::vector<SharingRow> qrf_sharing_experiment(std::size_t dim_a, std::size_t dim_b,
                                               std::size_t shared, std::size_t cycles, bool sync,
                                               std::uint64_t seed) {
  if (!std::has_single_bit(dim_a) || !std::has_single_bit(dim_b) || dim_a < 2 || dim_b < 2)
    throw ValidationError("agent dimensions must be powers of two, at least 2");
  SharingOptions o;
  o.qubits_a = static_cast<std::size_t>(std::countr_zero(dim_a));
  o.qubits_b = static_cast<std::size_t>(std::countr_zero(dim_b));
  o.shared = shared;
  o.cycles = cycles;
  o.sync = sync;
  o.seed = seed;
  return qrf_sharing_experiment(o);
}

}  // namespace holo::agent
