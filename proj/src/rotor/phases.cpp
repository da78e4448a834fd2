#include "exchlab/rotor/phases.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "exchlab/errors.hpp"

namespace exchlab::rotor {

using std::numbers::pi;

double theta_min_closed_form(const RotorModel& model, double a) {
  const double s = std::clamp(0.5 * (1.0 - model.A(a) / (4.0 * model.B())), 0.0, 1.0);
  return std::asin(std::sqrt(s));
}

MinimumTracker::MinimumTracker(const RotorModel& model, double max_jump) : model_(model), max_jump_(max_jump) {}

double MinimumTracker::next(double a) {
  const double A = model_.A(a);
  const double B = model_.B();
  auto W = [A, B](double th) {
    const double s = std::sin(th);
    const double c = std::cos(2 * th);
    return A * s * s + B * c * c;
  };
  constexpr int bits = std::numeric_limits<double>::digits / 2;
  if (theta_ < 0) {
    // global start: coarse scan, then refine; strict < keeps the larger theta on ties
    double best = 0.0;
    double best_w = W(0.0);
    constexpr int grid = 2048;
    for (int i = 1; i <= grid; ++i) {
      const double th = 0.5 * pi * i / grid;
      if (W(th) <= best_w) {
        best_w = W(th);
        best = th;
      }
    }
    const double h = 0.5 * pi / grid;
    theta_ = boost::math::tools::brent_find_minima(W, std::max(0.0, best - h), std::min(0.5 * pi, best + h), bits).first;
    return theta_;
  }
  const double lo = std::max(0.0, theta_ - max_jump_);
  const double hi = std::min(0.5 * pi, theta_ + max_jump_);
  const double th = boost::math::tools::brent_find_minima(W, lo, hi, bits).first;
  const double edge_tol = 1e-6;
  const bool at_window_edge = (th - lo < edge_tol && lo > 0.0) || (hi - th < edge_tol && hi < 0.5 * pi);
  if (at_window_edge) {
    throw MinimumTrackingFailure("potential minimum jumped away from theta = " + std::to_string(theta_) +
                                 " at a = " + std::to_string(a));
  }
  theta_ = th;
  return theta_;
}

StrayPhase stray_phase(const RotorModel& model, double A_prime, const RampSchedule& schedule, int intervals) {
  const int m = std::max(2, intervals + intervals % 2);
  const double T = schedule.duration();
  const double h = T / m;
  StrayPhase out;
  out.t.resize(static_cast<std::size_t>(m) + 1);
  out.theta_min.resize(out.t.size());
  MinimumTracker tracker(model);
  double sum = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double t = i * h;
    const double th = tracker.next(schedule.a_at(t));
    out.t[i] = t;
    out.theta_min[i] = th;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += w * std::sin(2 * th);
  }
  out.phase = model.P() * A_prime * sum * h / 3.0;
  return out;
}

}  // namespace exchlab::rotor
