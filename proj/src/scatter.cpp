#include "holoscreen/scatter.hpp"

namespace holo::scatter {

template class SMatrix<double>;

qcore::CMatrixd axis_change(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
  auto frame = [](const Eigen::Vector3d& axis) {
    qcore::CMatrixd u(2, 2);
    u.col(0) = screen::qubit_state(axis);
    u.col(1) = screen::qubit_state(-axis);
    return u;
  };
  return frame(to) * frame(from).adjoint();
}

qcore::CMatrixd basis_change_unitary(const screen::LocalBasis& from, const screen::LocalBasis& to) {
  if (from.size() != to.size() || from.size() == 0)
    throw DimensionMismatch("basis_change_unitary: bases must cover the same qubits");
  if (from.size() > kMaxDenseQubits)
    throw CapacityExceeded("basis_change_unitary: more than " + std::to_string(kMaxDenseQubits) +
                           " qubits");
  qcore::CMatrixd u = axis_change(from[0], to[0]);
  for (std::size_t j = 1; j < from.size(); ++j) u = qcore::kron(u, axis_change(from[j], to[j]));
  return u;
}

}  // namespace holo::scatter
