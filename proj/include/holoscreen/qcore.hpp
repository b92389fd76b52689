#pragma once

// Dense finite-dimensional quantum-state kernel. Everything is templated on
// the real scalar; the `d` aliases at the bottom are what the rest of the
// library uses.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "holoscreen/config.hpp"
#include "holoscreen/errors.hpp"

namespace holo::qcore {

inline constexpr std::size_t kMaxJointDim = std::size_t{1} << 12;

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

enum class Side { A, B };

/// dim(H_A) × dim(H_B); amplitude index is ia·dimB + ib.
struct BipartiteSplit {
  std::size_t dim_a = 1;
  std::size_t dim_b = 1;

  BipartiteSplit(std::size_t a, std::size_t b) : dim_a(a), dim_b(b) {
    if (a == 0 || b == 0) throw ValidationError("bipartite split dimensions must be positive");
  }
  std::size_t dim() const noexcept { return dim_a * dim_b; }
  std::size_t kept(Side s) const noexcept { return s == Side::A ? dim_a : dim_b; }
};

namespace detail {
struct Trusted {};

inline void check_capacity(std::size_t dim) {
  if (dim == 0) throw ValidationError("dimension must be at least 1");
  if (dim > kMaxJointDim)
    throw CapacityExceeded("joint dimension " + std::to_string(dim) + " exceeds cap " +
                           std::to_string(kMaxJointDim));
}

template <typename Derived>
typename Derived::RealScalar hermitian_deviation(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}
}  // namespace detail

/// Deviation ‖U†U − I‖_max.
template <typename Derived>
typename Derived::RealScalar unitary_deviation(const Eigen::MatrixBase<Derived>& u) {
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (u.rows() != u.cols()) return std::numeric_limits<typename Derived::RealScalar>::infinity();
  const M gram = u.adjoint() * u;
  return (gram - M::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

template <typename Real>
class DensityMatrix;

/// Normalized pure state.
template <typename Real>
class StateVector {
 public:
  using Vector = CVector<Real>;

  /// Validates ‖ψ‖ = 1 within the normalization tolerance.
  explicit StateVector(Vector amplitudes) : amp_(std::move(amplitudes)) {
    detail::check_capacity(static_cast<std::size_t>(amp_.size()));
    const Real err = std::abs(amp_.squaredNorm() - Real(1));
    if (err > Real(tolerances().normalization))
      throw ValidationError("state vector not normalized: |‖ψ‖² − 1| = " + std::to_string(err));
  }

  StateVector(Vector amplitudes, detail::Trusted) : amp_(std::move(amplitudes)) {}

  /// Rescales a nonzero vector to unit norm.
  static StateVector normalized(const Vector& raw) {
    const Real n = raw.norm();
    if (!(n > Real(0))) throw ValidationError("cannot normalize the zero vector");
    detail::check_capacity(static_cast<std::size_t>(raw.size()));
    return StateVector(raw / n, detail::Trusted{});
  }

  static StateVector basis(std::size_t dim, std::size_t index) {
    detail::check_capacity(dim);
    if (index >= dim) throw ValidationError("basis index out of range");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = Real(1);
    return StateVector(std::move(v), detail::Trusted{});
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amp_.size()); }
  const Vector& amplitudes() const noexcept { return amp_; }
  Complex<Real> operator[](std::size_t i) const { return amp_(static_cast<Eigen::Index>(i)); }

  DensityMatrix<Real> projector() const;

 private:
  Vector amp_;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
template <typename Real>
class DensityMatrix {
 public:
  using Matrix = CMatrix<Real>;

  explicit DensityMatrix(Matrix entries) : rho_(std::move(entries)) {
    const auto& tol = tolerances();
    if (rho_.rows() != rho_.cols()) throw DimensionMismatch("density matrix must be square");
    detail::check_capacity(static_cast<std::size_t>(rho_.rows()));
    const Real herm = detail::hermitian_deviation(rho_);
    if (herm > Real(tol.hermitian))
      throw NonHermitian("density matrix not Hermitian: deviation " + std::to_string(herm));
    const Real tr_err = std::abs(rho_.trace() - Complex<Real>(1));
    if (tr_err > Real(tol.normalization))
      throw ValidationError("density matrix trace deviates from 1 by " + std::to_string(tr_err));
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -Real(tol.psd))
      throw ValidationError("density matrix has a negative eigenvalue");
  }

  DensityMatrix(Matrix entries, detail::Trusted) : rho_(std::move(entries)) {}

  std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
  const Matrix& entries() const noexcept { return rho_; }

 private:
  Matrix rho_;
};

template <typename Real>
DensityMatrix<Real> StateVector<Real>::projector() const {
  return DensityMatrix<Real>(amp_ * amp_.adjoint(), detail::Trusted{});
}

/// Kronecker product of two vectors or matrices (a is the slow index).
template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                                          a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename Real>
StateVector<Real> tensor_product(const StateVector<Real>& a, const StateVector<Real>& b) {
  detail::check_capacity(a.dim() * b.dim());
  CVector<Real> v = kron(a.amplitudes(), b.amplitudes());
  return StateVector<Real>(std::move(v), detail::Trusted{});
}

template <typename Real>
DensityMatrix<Real> tensor_product(const DensityMatrix<Real>& a, const DensityMatrix<Real>& b) {
  detail::check_capacity(a.dim() * b.dim());
  return DensityMatrix<Real>(kron(a.entries(), b.entries()), detail::Trusted{});
}

template <typename Real>
DensityMatrix<Real> partial_trace(const DensityMatrix<Real>& rho, const BipartiteSplit& split,
                                  Side keep) {
  if (rho.dim() != split.dim())
    throw DimensionMismatch("partial_trace: rho has dim " + std::to_string(rho.dim()) +
                            " but split is " + std::to_string(split.dim_a) + "x" +
                            std::to_string(split.dim_b));
  const auto da = static_cast<Eigen::Index>(split.dim_a);
  const auto db = static_cast<Eigen::Index>(split.dim_b);
  const auto& m = rho.entries();
  CMatrix<Real> out;
  if (keep == Side::A) {
    out = CMatrix<Real>::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  } else {
    out = CMatrix<Real>::Zero(db, db);
    for (Eigen::Index i = 0; i < db; ++i)
      for (Eigen::Index j = 0; j < db; ++j)
        for (Eigen::Index k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  }
  return DensityMatrix<Real>(std::move(out), detail::Trusted{});
}

/// dimA × dimB coefficient matrix Ψ with Ψ(ia, ib) = ψ[ia·dimB + ib].
template <typename Real>
CMatrix<Real> coefficient_matrix(const StateVector<Real>& psi, const BipartiteSplit& split) {
  if (psi.dim() != split.dim())
    throw DimensionMismatch("state has dim " + std::to_string(psi.dim()) + " but split is " +
                            std::to_string(split.dim_a) + "x" + std::to_string(split.dim_b));
  const auto da = static_cast<Eigen::Index>(split.dim_a);
  const auto db = static_cast<Eigen::Index>(split.dim_b);
  CMatrix<Real> m(da, db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < db; ++j) m(i, j) = psi.amplitudes()(i * db + j);
  return m;
}

/// Reduced state of a pure joint state, computed as ΨΨ† (or ΨᵀΨ*) without
/// forming the joint projector.
template <typename Real>
DensityMatrix<Real> reduced_density(const StateVector<Real>& psi, const BipartiteSplit& split,
                                    Side keep) {
  const CMatrix<Real> m = coefficient_matrix(psi, split);
  CMatrix<Real> r = keep == Side::A ? CMatrix<Real>(m * m.adjoint())
                                    : CMatrix<Real>((m.transpose() * m.conjugate()));
  return DensityMatrix<Real>(std::move(r), detail::Trusted{});
}

namespace detail {
template <typename Real, typename Derived>
Real entropy_from_eigenvalues(const Eigen::MatrixBase<Derived>& lambdas, std::size_t dim) {
  const Real cutoff = Real(tolerances().eigen_cutoff);
  Real s(0);
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    const Real l = lambdas(i);
    if (l > cutoff) s -= l * std::log2(l);
  }
  // Rounding on a pure state leaves O(ε) residue; report it as exact zero.
  if (s < cutoff) return Real(0);
  return std::min(s, std::log2(static_cast<Real>(dim)));
}
}  // namespace detail

/// −Σ λ log₂ λ over eigenvalues above the cutoff, in bits.
template <typename Real>
Real von_neumann_entropy(const DensityMatrix<Real>& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(rho.entries(), Eigen::EigenvaluesOnly);
  return detail::entropy_from_eigenvalues<Real>(es.eigenvalues(), rho.dim());
}

/// Raw-matrix overload; rejects non-Hermitian input.
template <typename Derived>
typename Derived::RealScalar von_neumann_entropy(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  if (m.rows() != m.cols()) throw DimensionMismatch("entropy requires a square matrix");
  const Real dev = detail::hermitian_deviation(m);
  if (dev > Real(tolerances().hermitian))
    throw NonHermitian("entropy of non-Hermitian matrix (deviation " + std::to_string(dev) + ")");
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<M> es(M(m), Eigen::EigenvaluesOnly);
  return detail::entropy_from_eigenvalues<Real>(es.eigenvalues(),
                                                static_cast<std::size_t>(m.rows()));
}

template <typename Real>
constexpr Real bits_to_nats(Real bits) noexcept {
  return bits * std::numbers::ln2_v<Real>;
}

template <typename Real>
constexpr Real nats_to_bits(Real nats) noexcept {
  return nats / std::numbers::ln2_v<Real>;
}

/// S(ρ_keep) for a pure joint state.
template <typename Real>
Real entanglement_entropy(const StateVector<Real>& psi, const BipartiteSplit& split,
                          Side keep = Side::A) {
  return von_neumann_entropy(reduced_density(psi, split, keep));
}

enum class Separability { separable, entangled };

template <typename Real>
struct SchmidtResult {
  Separability verdict;
  std::size_t rank;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> coefficients;  ///< singular values, descending
};

template <typename Real>
SchmidtResult<Real> schmidt_separability(const StateVector<Real>& psi, const BipartiteSplit& split,
                                         Real tol = Real(tolerances().schmidt)) {
  const CMatrix<Real> m = coefficient_matrix(psi, split);
  Eigen::JacobiSVD<CMatrix<Real>> svd(m);
  const auto& sv = svd.singularValues();
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return {rank == 1 ? Separability::separable : Separability::entangled, rank, sv};
}

/// U·ψ for unitary U; rejects U with ‖U†U − I‖_max above tolerance.
template <typename Real, typename Derived>
StateVector<Real> evolve(const StateVector<Real>& psi, const Eigen::MatrixBase<Derived>& u) {
  if (u.rows() != u.cols() || static_cast<std::size_t>(u.cols()) != psi.dim())
    throw DimensionMismatch("evolve: operator is " + std::to_string(u.rows()) + "x" +
                            std::to_string(u.cols()) + ", state dim " + std::to_string(psi.dim()));
  const Real dev = unitary_deviation(u);
  if (dev > Real(tolerances().unitary))
    throw NonUnitary("evolve: operator is not unitary, ‖U†U − I‖_max = " + std::to_string(dev),
                     static_cast<double>(dev));
  CVector<Real> out = u * psi.amplitudes();
  return StateVector<Real>(std::move(out), detail::Trusted{});
}

/// Common single-qubit gates.
template <typename Real>
struct Gates {
  using M = CMatrix<Real>;
  static M identity(std::size_t n) { return M::Identity(n, n); }
  static M pauli_x() {
    M m(2, 2);
    m << 0, 1, 1, 0;
    return m;
  }
  static M pauli_y() {
    M m(2, 2);
    m << 0, Complex<Real>(0, -1), Complex<Real>(0, 1), 0;
    return m;
  }
  static M pauli_z() {
    M m(2, 2);
    m << 1, 0, 0, -1;
    return m;
  }
  static M hadamard() {
    const Real s = Real(1) / std::sqrt(Real(2));
    M m(2, 2);
    m << s, s, s, -s;
    return m;
  }
  /// exp(−iθσ_y/2).
  static M ry(Real theta) {
    M m(2, 2);
    const Real c = std::cos(theta / 2), s = std::sin(theta / 2);
    m << c, -s, s, c;
    return m;
  }
  /// exp(−iθσ_z/2).
  static M rz(Real theta) {
    M m = M::Zero(2, 2);
    m(0, 0) = std::polar(Real(1), -theta / 2);
    m(1, 1) = std::polar(Real(1), theta / 2);
    return m;
  }
};

using StateVectord = StateVector<double>;
using DensityMatrixd = DensityMatrix<double>;
using CVectord = CVector<double>;
using CMatrixd = CMatrix<double>;
using Gatesd = Gates<double>;

}  // namespace holo::qcore
