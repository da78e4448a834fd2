#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "exchlab/rotor/basis.hpp"

namespace exchlab::rotor {

/// Control schedule a(t) on [0, T]. Samples are interpolated with a monotone
/// cubic (PCHIP) unless the schedule is a staircase, in which case a(t) is
/// held at a_k on [t_k, t_{k+1}).
class RampSchedule {
 public:
  RampSchedule() = default;
  RampSchedule(std::vector<double> t, std::vector<double> a, bool staircase = false);

  [[nodiscard]] const std::vector<double>& times() const noexcept { return t_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return a_; }
  [[nodiscard]] double duration() const noexcept { return t_.empty() ? 0.0 : t_.back(); }
  [[nodiscard]] bool staircase() const noexcept { return staircase_; }
  [[nodiscard]] double a_start() const { return a_.front(); }
  [[nodiscard]] double a_end() const { return a_.back(); }

  [[nodiscard]] double a_at(double t) const;
  /// da/dt; zero for a staircase.
  [[nodiscard]] double rate_at(double t) const;

  /// Segment boundaries a propagator must step onto (staircase only).
  [[nodiscard]] std::vector<double> breakpoints() const;

 private:
  std::vector<double> t_;
  std::vector<double> a_;
  bool staircase_ = false;
  std::shared_ptr<const std::function<double(double)>> value_;
  std::shared_ptr<const std::function<double(double)>> prime_;
};

struct GammaSamples {
  std::vector<double> a;
  std::vector<double> gamma;
};

/// gamma(a) on an even grid of `count` points (perturbative evaluation), then
/// bisected wherever neighbouring values differ by more than `refine` relative.
/// refine <= 0 keeps the even grid.
[[nodiscard]] GammaSamples sample_gamma(const LinearHamiltonian& h, double a_start, double a_end, int count = 401,
                                        int k = 24, int threads = 1, double refine = 0.05);

/// Schedule with dt = gamma(a) |da|, rescaled to total duration T. Requires at
/// least 200 strictly positive samples ordered from a_start to a_end.
[[nodiscard]] RampSchedule build_ramp(double a_start, double a_end, double T, const GammaSamples& samples);

[[nodiscard]] RampSchedule linear_ramp(double a_start, double a_end, double T, int samples = 201);
[[nodiscard]] RampSchedule frozen_ramp(double a, double T);

/// a(T - t).
[[nodiscard]] RampSchedule reversed(const RampSchedule& s);

/// `first` followed by `second`; second.a_start must equal first.a_end.
[[nodiscard]] RampSchedule concatenate(const RampSchedule& first, const RampSchedule& second);

/// Holds a at its value at each segment midpoint over `segments` equal slices.
[[nodiscard]] RampSchedule staircase(const RampSchedule& s, int segments);

}  // namespace exchlab::rotor
