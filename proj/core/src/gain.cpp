#include "cansim/gain.hpp"

#include <cmath>

namespace cansim {

GainSchedule GainSchedule::make(double settling_time, double exponent, double guard_factor) {
  GainSchedule s{settling_time, exponent, guard_factor * settling_time};
  s.validate();
  return s;
}

void GainSchedule::validate() const {
  if (!(settling_time > 0.0)) throw ValidationError("gain schedule: settling time must be > 0");
  if (!(exponent > 0.0)) throw ValidationError("gain schedule: exponent must be > 0");
  if (!(guard > 0.0) || !(guard < settling_time))
    throw ValidationError("gain schedule: guard must satisfy 0 < guard < T");
}

double phi(double t, const GainSchedule& sched) {
  if (t >= sched.settling_time) return 1.0;
  double tail = sched.settling_time - std::max(t, 0.0);
  if (tail < sched.guard) tail = sched.guard;
  return std::pow(sched.settling_time / tail, sched.exponent);
}

double gain_ratio(double t, const GainSchedule& sched) {
  if (t >= sched.settling_time) return 0.0;
  double tail = sched.settling_time - std::max(t, 0.0);
  if (tail < sched.guard) tail = sched.guard;
  return sched.exponent / tail;
}

}  // namespace cansim
