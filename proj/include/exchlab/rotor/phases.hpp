#pragma once

#include <vector>

#include "exchlab/rotor/ramp.hpp"
#include "exchlab/rotor/trap.hpp"

namespace exchlab::rotor {

/// Minimum of A sin^2 theta + B cos^2 2theta on [0, pi/2] from sin^2 theta = s*.
[[nodiscard]] double theta_min_closed_form(const RotorModel& model, double a);

/// Follows the potential minimum in [0, pi/2] by local bracketed minimisation
/// from the previous value. At a = a_start the search is global and a tie at
/// theta = 0 resolves toward theta > 0. Throws MinimumTrackingFailure when the
/// minimum moves by more than `max_jump` between consecutive samples.
class MinimumTracker {
 public:
  MinimumTracker(const RotorModel& model, double max_jump = 0.2);

  double next(double a);
  [[nodiscard]] double current() const noexcept { return theta_; }

 private:
  const RotorModel& model_;
  double max_jump_;
  double theta_ = -1.0;
};

struct StrayPhase {
  double phase = 0.0;  ///< radians
  std::vector<double> t;
  std::vector<double> theta_min;
};

/// phi_s = P A' * integral sin(2 theta_min(t)) dt, from the stray term
/// m r0^2 A' sin^2(theta + pi/4) evaluated at +theta_min and -theta_min.
/// Composite Simpson on `intervals` (rounded up to even) equal steps.
[[nodiscard]] StrayPhase stray_phase(const RotorModel& model, double A_prime, const RampSchedule& schedule,
                                     int intervals = 200000);

}  // namespace exchlab::rotor
