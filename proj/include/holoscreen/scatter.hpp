#pragma once

// Scattering-matrix view of the screen interaction.

#include <Eigen/Dense>

#include <bit>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "holoscreen/qcore.hpp"
#include "holoscreen/screen.hpp"
#include "holoscreen/units.hpp"

namespace holo::scatter {

inline constexpr std::size_t kMaxDenseQubits = 10;

/// Unitary on N qubits. Built from an interaction it is diagonal with
/// entries e^{−iE(s)τ} over spin strings s (qubit j is bit N−1−j of the
/// index, bit 0 ↔ spin +1), and also carries its per-qubit 2×2 factors.
template <typename Real>
class SMatrix {
 public:
  using Matrix = qcore::CMatrix<Real>;
  using Vector = qcore::CVector<Real>;

  /// τ defaults to one tick period at the spec's temperature. Only the shape
  /// of the spec is checked, so limits such as β → 0 are representable.
  static SMatrix from_interaction(const screen::InteractionSpec& spec, screen::Party k,
                                  std::optional<Real> tau = std::nullopt) {
    const std::size_t n = spec.n;
    const auto& w = spec.weights(k);
    if (n == 0 || w.size() != n) throw ValidationError("from_interaction: malformed spec");
    if (n > 12) throw CapacityExceeded("from_interaction: more than 12 qubits");
    const Real t = tau ? *tau : Real(tick_period(spec.temperature));
    const Real scale = Real(spec.beta_of(k) * spec.temperature) * t;

    SMatrix s;
    s.n_ = n;
    s.tag_ = std::string("diagonal:") + screen::name(k);
    s.diag_ = Vector::Ones(Eigen::Index{1} << n);
    for (std::size_t j = 0; j < n; ++j) {
      const Real phase = scale * Real(w[j]);
      Matrix f = Matrix::Zero(2, 2);
      f(0, 0) = std::polar(Real(1), -phase);
      f(1, 1) = std::polar(Real(1), phase);
      s.factors_.push_back(f);
    }
    for (Eigen::Index idx = 0; idx < s.diag_->size(); ++idx) {
      Real e = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const int spin = ((idx >> (n - 1 - j)) & 1) ? -1 : 1;
        e += Real(w[j]) * Real(spin);
      }
      (*s.diag_)(idx) = std::polar(Real(1), -scale * e);
    }
    return s;
  }

  /// Wraps a dense unitary; throws NonUnitary above tolerance.
  static SMatrix from_dense(Matrix m, std::string tag) {
    if (m.rows() != m.cols() || m.rows() < 2 || (m.rows() & (m.rows() - 1)) != 0)
      throw DimensionMismatch("SMatrix: dense form must be 2^N x 2^N");
    const Real dev = qcore::unitary_deviation(m);
    if (dev > Real(tolerances().unitary))
      throw NonUnitary("SMatrix: ‖S†S − I‖_max = " + std::to_string(dev), double(dev));
    SMatrix s;
    s.n_ = static_cast<std::size_t>(std::countr_zero(static_cast<std::size_t>(m.rows())));
    s.tag_ = std::move(tag);
    s.dense_ = std::move(m);
    return s;
  }

  std::size_t qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return std::size_t{1} << n_; }
  bool is_diagonal() const noexcept { return diag_.has_value(); }
  const std::string& basis_tag() const noexcept { return tag_; }

  /// Per-qubit factors; empty unless built from an interaction.
  const std::vector<Matrix>& factors() const noexcept { return factors_; }

  /// Diagonal entries; throws unless diagonal.
  const Vector& diagonal() const {
    if (!diag_) throw ValidationError("SMatrix is not diagonal");
    return *diag_;
  }

  /// Dense 2^N × 2^N form, N ≤ 10.
  Matrix dense() const {
    if (dense_) return *dense_;
    if (n_ > kMaxDenseQubits)
      throw CapacityExceeded("SMatrix: dense form limited to " + std::to_string(kMaxDenseQubits) +
                             " qubits");
    return diag_->asDiagonal();
  }

  SMatrix adjoint() const {
    SMatrix s = *this;
    if (s.diag_) *s.diag_ = s.diag_->conjugate();
    if (s.dense_) *s.dense_ = s.dense_->adjoint().eval();
    for (auto& f : s.factors_) f = f.adjoint().eval();
    return s;
  }

  /// ‖S†S − I‖_max.
  Real unitarity_deviation() const {
    if (diag_) return (diag_->cwiseAbs2().array() - Real(1)).abs().maxCoeff();
    return qcore::unitary_deviation(*dense_);
  }

  Vector operator*(const Vector& v) const {
    if (static_cast<std::size_t>(v.size()) != dim())
      throw DimensionMismatch("SMatrix of dim " + std::to_string(dim()) + " applied to a state of dim " +
                              std::to_string(v.size()));
    if (diag_) return diag_->cwiseProduct(v);
    return *dense_ * v;
  }

 private:
  SMatrix() = default;

  std::size_t n_ = 0;
  std::string tag_;
  std::optional<Vector> diag_;
  std::optional<Matrix> dense_;
  std::vector<Matrix> factors_;
};

/// in = S·out; throws DimensionMismatch on a size mismatch.
template <typename Real>
qcore::StateVector<Real> apply(const SMatrix<Real>& s, const qcore::StateVector<Real>& out_state) {
  return qcore::StateVector<Real>(s * out_state.amplitudes(), qcore::detail::Trusted{});
}

/// Single-qubit unitary taking the ±axis eigenstates of `from` to those of `to`.
qcore::CMatrixd axis_change(const Eigen::Vector3d& from, const Eigen::Vector3d& to);

/// ⊗_j axis_change(from[j], to[j]), N ≤ 10.
qcore::CMatrixd basis_change_unitary(const screen::LocalBasis& from, const screen::LocalBasis& to);

/// U·S·U† in the basis named by `tag`.
template <typename Real>
SMatrix<Real> conjugate(const SMatrix<Real>& s, const qcore::CMatrix<Real>& u, std::string tag) {
  if (static_cast<std::size_t>(u.rows()) != s.dim())
    throw DimensionMismatch("conjugate: basis change has the wrong dimension");
  typename SMatrix<Real>::Matrix m = u * s.dense() * u.adjoint();
  return SMatrix<Real>::from_dense(std::move(m), std::move(tag));
}

using SMatrixd = SMatrix<double>;

inline SMatrixd from_interaction(const screen::InteractionSpec& spec, screen::Party k,
                                 std::optional<double> tau = std::nullopt) {
  return SMatrixd::from_interaction(spec, k, tau);
}

extern template class SMatrix<double>;

}  // namespace holo::scatter
