#include "holoscreen/screen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "holoscreen/rng.hpp"

namespace holo::screen {

const char* name(Party p) noexcept { return p == Party::A ? "A" : "B"; }

const char* name(Phase p) noexcept {
  switch (p) {
    case Phase::b_prepare: return "B-prepare";
    case Phase::a_measure: return "A-measure";
    case Phase::a_prepare: return "A-prepare";
    case Phase::b_measure: return "B-measure";
  }
  return "?";
}

void validate(const InteractionSpec& spec) {
  const double tol = tolerances().normalization;
  if (spec.n < 1) throw ValidationError("interaction needs N >= 1");
  for (Party k : {Party::A, Party::B}) {
    const auto& w = spec.weights(k);
    if (w.size() != spec.n)
      throw ValidationError(std::string("alpha[") + name(k) + "] has " + std::to_string(w.size()) +
                            " weights, expected " + std::to_string(spec.n));
    double sum = 0.0;
    for (double a : w) {
      if (!(a >= 0.0 && a <= 1.0))
        throw ValidationError(std::string("alpha[") + name(k) + "] weight outside [0,1]");
      sum += a;
    }
    if (std::abs(sum - 1.0) > tol)
      throw ValidationError(std::string("alpha[") + name(k) + "] sums to " + std::to_string(sum) +
                            ", expected 1");
    if (!(spec.beta_of(k) >= std::numbers::ln2))
      throw ValidationError(std::string("beta[") + name(k) + "] = " +
                            std::to_string(spec.beta_of(k)) + " is below ln 2");
  }
  if (!(spec.temperature > 0.0)) throw ValidationError("temperature must be positive");
}

InteractionSpec build_interaction(std::size_t n, std::vector<double> alpha_a,
                                  std::vector<double> alpha_b, double beta_a, double beta_b,
                                  double temperature) {
  InteractionSpec spec;
  spec.n = n;
  spec.alpha = {std::move(alpha_a), std::move(alpha_b)};
  spec.beta = {beta_a, beta_b};
  spec.temperature = temperature;
  validate(spec);
  return spec;
}

InteractionSpec build_interaction(std::size_t n, const std::vector<double>& alpha, double beta,
                                  double temperature) {
  return build_interaction(n, alpha, alpha, beta, beta, temperature);
}

double eigenvalue(const InteractionSpec& spec, Party k, std::span<const int> spins) {
  const auto& w = spec.weights(k);
  if (spins.size() != w.size())
    throw DimensionMismatch("eigenvalue: " + std::to_string(spins.size()) + " spins for N = " +
                            std::to_string(w.size()));
  double sum = 0.0;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] != 1 && spins[i] != -1) throw ValidationError("spins must be +1 or -1");
    sum += w[i] * spins[i];
  }
  return spec.beta_of(k) * spec.temperature * sum;
}

LocalBasis::LocalBasis(std::vector<Eigen::Vector3d> axes) : axes_(std::move(axes)) {
  const double tol = tolerances().axis;
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (std::abs(axes_[i].norm() - 1.0) > tol)
      throw ValidationError("basis axis " + std::to_string(i) + " is not a unit vector");
}

LocalBasis LocalBasis::computational(std::size_t n) {
  return LocalBasis(std::vector<Eigen::Vector3d>(n, Eigen::Vector3d::UnitZ()));
}

LocalBasis LocalBasis::tilted(std::size_t n, double angle) {
  return LocalBasis(
      std::vector<Eigen::Vector3d>(n, Eigen::Vector3d(std::sin(angle), 0.0, std::cos(angle))));
}

LocalBasis LocalBasis::with_axis(std::size_t i, const Eigen::Vector3d& axis) const {
  auto copy = axes_;
  copy.at(i) = axis;
  return LocalBasis(std::move(copy));
}

ScreenState ScreenState::fresh(std::size_t n) {
  return {std::vector<Eigen::Vector3d>(n, Eigen::Vector3d::UnitZ()),
          std::vector<Writer>(n, Writer::none)};
}

qcore::CVectord qubit_state(const Eigen::Vector3d& r) {
  qcore::CVectord v(2);
  const double z = std::clamp(r.z(), -1.0, 1.0);
  const double c = std::sqrt((1.0 + z) / 2.0);
  if (c < 1e-15) {
    v << 0.0, 1.0;
    return v;
  }
  v(0) = c;
  v(1) = std::complex<double>(r.x(), r.y()) / (2.0 * c);
  return v / v.norm();
}

qcore::StateVectord ScreenState::joint_state() const {
  if (bloch.empty()) throw ValidationError("empty screen");
  qcore::CVectord v = qubit_state(bloch.front());
  for (std::size_t i = 1; i < bloch.size(); ++i) {
    qcore::detail::check_capacity(static_cast<std::size_t>(v.size()) * 2);
    v = qcore::kron(v, qubit_state(bloch[i]));
  }
  return qcore::StateVectord::normalized(v);
}

void prepare(ScreenState& screen, Party actor, const LocalBasis& basis, std::size_t q, int spin) {
  if (spin != 1 && spin != -1) throw ValidationError("prepared spin must be +1 or -1");
  screen.bloch.at(q) = spin * basis[q];
  screen.last_writer.at(q) = actor == Party::A ? Writer::A : Writer::B;
}

double plus_probability(const ScreenState& screen, const LocalBasis& basis, std::size_t q) {
  const double p = 0.5 * (1.0 + basis[q].dot(screen.bloch.at(q)));
  return std::clamp(p, 0.0, 1.0);
}

int measure(ScreenState& screen, const LocalBasis& basis, std::size_t q, double u) {
  const int outcome = u < plus_probability(screen, basis, q) ? 1 : -1;
  screen.bloch[q] = outcome * basis[q];
  return outcome;
}

CycleRecord exchange_cycle(ScreenState& screen, const InteractionSpec& spec,
                           const LocalBasis& basis_a, const LocalBasis& basis_b,
                           std::span<const int> b_prepares, const PreparePolicy& a_policy,
                           std::uint64_t seed) {
  const std::size_t n = screen.size();
  if (spec.n != n || basis_a.size() != n || basis_b.size() != n || b_prepares.size() != n)
    throw DimensionMismatch("exchange_cycle: screen, spec, bases and preparations must all have N = " +
                            std::to_string(n));
  if (const auto* bits = std::get_if<std::vector<int>>(&a_policy); bits && bits->size() != n)
    throw DimensionMismatch("exchange_cycle: A preparation has wrong length");

  CycleRecord rec;
  rec.seed = seed;
  rec.entries.reserve(4 * n);

  auto log = [&](Phase phase, std::size_t q, const Eigen::Vector3d& axis, int spin) {
    const Party k = actor_of(phase);
    const double contrib = spec.beta_of(k) * spec.temperature * spec.weights(k)[q] * spin;
    rec.entries.push_back({phase, k, q, axis, spin, contrib, seed});
    rec.spins[static_cast<std::size_t>(phase)].push_back(spin);
  };

  auto run_measure = [&](Phase phase, const LocalBasis& basis) {
    CounterRng rng(seed, static_cast<std::uint64_t>(phase));
    for (std::size_t q = 0; q < n; ++q) {
      const double u = static_cast<double>(rng.at(q) >> 11) * 0x1.0p-53;
      log(phase, q, basis[q], measure(screen, basis, q, u));
    }
  };

  for (std::size_t q = 0; q < n; ++q) {
    prepare(screen, Party::B, basis_b, q, b_prepares[q]);
    log(Phase::b_prepare, q, basis_b[q], b_prepares[q]);
  }
  rec.bits_b_to_a = n;
  run_measure(Phase::a_measure, basis_a);

  const std::vector<int> a_bits = std::holds_alternative<Echo>(a_policy)
                                      ? rec.of(Phase::a_measure)
                                      : std::get<std::vector<int>>(a_policy);
  for (std::size_t q = 0; q < n; ++q) {
    prepare(screen, Party::A, basis_a, q, a_bits[q]);
    log(Phase::a_prepare, q, basis_a[q], a_bits[q]);
  }
  rec.bits_a_to_b = n;
  run_measure(Phase::b_measure, basis_b);

  for (Phase p : {Phase::b_prepare, Phase::a_measure, Phase::a_prepare, Phase::b_measure})
    rec.eigenvalues[static_cast<std::size_t>(p)] = eigenvalue(spec, actor_of(p), rec.of(p));
  return rec;
}

VoxelGeometry VoxelGeometry::for_cells(std::size_t n, double dx, double dt) {
  if (!(dx >= 1.0) || !(dt >= 1.0))
    throw ValidationError("voxel dimensions below the Planck floor");
  const double side = 2.0 * dx;
  return {dx, dt, static_cast<double>(n) * side * side};
}

VoxelGeometry VoxelGeometry::with_area(double area, double dx, double dt) {
  if (!(dx >= 1.0) || !(dt >= 1.0))
    throw ValidationError("voxel dimensions below the Planck floor");
  if (!(area >= 0.0)) throw ValidationError("area must be nonnegative");
  return {dx, dt, area};
}

BoundCheck check_ghp_bound(const InteractionSpec& spec, const VoxelGeometry& geom) {
  const double bound = geom.area / 4.0;
  const double n = static_cast<double>(spec.n);
  if (n <= bound) return {true, bound, 0.0};
  return {false, bound, n - bound};
}

}  // namespace holo::screen
