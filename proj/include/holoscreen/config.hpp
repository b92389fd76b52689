#pragma once

#include <optional>
#include <string_view>

namespace holo {

/// Every numerical tolerance used by the library.
struct Tolerances {
  double normalization = 1e-10;   ///< ‖ψ‖ = 1, tr ρ = 1, Σα = 1, CPT rows
  double hermitian = 1e-10;
  double unitary = 1e-10;         ///< ‖U†U − I‖_max
  double psd = 1e-10;             ///< smallest admissible eigenvalue is −psd
  double eigen_cutoff = 1e-12;    ///< eigenvalues at or below are dropped from −Σλlogλ
  double schmidt = 1e-10;         ///< singular values above count toward the Schmidt rank
  double infomorphism = 1e-9;
  double marginal = 1e-9;         ///< context/joint marginal agreement
  double factorization = 1e-9;    ///< conditional-independence check
  double axis = 1e-10;            ///< unit-norm basis axes
};

/// Process-wide tolerance record. Read-only once experiments start.
const Tolerances& tolerances();
void set_tolerances(const Tolerances& tol);

/// Parses an override string. A bare number sets the infomorphism, marginal
/// and factorization tolerances; `key=value` pairs separated by commas set
/// individual fields. Returns nullopt on malformed input.
std::optional<Tolerances> parse_tolerance_override(std::string_view text, Tolerances base);

/// Applies HOLOSCREEN_TOL when present. Returns false if it was malformed.
bool apply_tolerance_env();

}  // namespace holo
