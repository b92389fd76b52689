#pragma once

// Natural units: ħ = k_B = c = 1, so h = 2π and energies are in units of T.

#include <numbers>

namespace holo {

inline constexpr double kPlanckH = 2.0 * std::numbers::pi;

/// Minimal time to write one bit at temperature T: h / (ln 2 · T).
inline double tick_period(double temperature) {
  return kPlanckH / (std::numbers::ln2 * temperature);
}

}  // namespace holo
