#pragma once

#include "cansim/errors.hpp"

namespace cansim {

/// Width of the clamp window around the settling time, as a fraction of T.
/// The true gain diverges at T; the clamp keeps the closed loop Lipschitz on
/// every integration step. 1e-12 leaves time increments representable in
/// double while driving the residual error orders of magnitude below the
/// verdict tolerances.
inline constexpr double kDefaultGuardFactor = 1e-12;

/// Prescribed-time gain schedule: phi(t) = (T / (T - t))^kappa on [0, T) and
/// exactly 1 from T on. Near T the evaluation is clamped on
/// [T - guard, T), so phi jumps from the clamp value back to 1 at T; that
/// discontinuity is part of the definition, not an artifact.
struct GainSchedule {
  double settling_time = 0.0;  // T, seconds
  double exponent = 0.0;       // kappa
  double guard = 0.0;          // epsilon_T, seconds

  static GainSchedule make(double settling_time, double exponent,
                           double guard_factor = kDefaultGuardFactor);
  void validate() const;
};

/// phi(t, T) >= 1, clamped at phi(T - guard) on [T - guard, T).
double phi(double t, const GainSchedule& sched);

/// phidot/phi in the closed form kappa / (T - t); clamped at kappa / guard
/// on [T - guard, T) and 0 from T on. The closed form avoids dividing two
/// huge powers when kappa is large.
double gain_ratio(double t, const GainSchedule& sched);

}  // namespace cansim
