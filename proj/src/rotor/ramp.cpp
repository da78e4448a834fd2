#include "exchlab/rotor/ramp.hpp"

#include <algorithm>
#include <cmath>

// Boost 1.74's pchip header calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <stdexcept>

#include "exchlab/errors.hpp"
#include "exchlab/rotor/spectrum.hpp"
#include "exchlab/util/parallel.hpp"

namespace exchlab::rotor {

RampSchedule::RampSchedule(std::vector<double> t, std::vector<double> a, bool staircase)
    : t_(std::move(t)), a_(std::move(a)), staircase_(staircase) {
  if (t_.size() != a_.size() || t_.size() < 2) throw std::invalid_argument("ramp needs at least two samples");
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!(t_[i] > t_[i - 1])) throw std::invalid_argument("ramp times must increase strictly");
  }
  if (staircase_) return;
  if (t_.size() < 4) {
    // pchip needs four points; fall back to linear interpolation
    auto tt = t_;
    auto aa = a_;
    auto linear = [tt, aa](double x) {
      const auto it = std::upper_bound(tt.begin() + 1, tt.end() - 1, x);
      const std::size_t i = static_cast<std::size_t>(it - tt.begin()) - 1;
      return aa[i] + (aa[i + 1] - aa[i]) * (x - tt[i]) / (tt[i + 1] - tt[i]);
    };
    auto slope = [tt, aa](double x) {
      const auto it = std::upper_bound(tt.begin() + 1, tt.end() - 1, x);
      const std::size_t i = static_cast<std::size_t>(it - tt.begin()) - 1;
      return (aa[i + 1] - aa[i]) / (tt[i + 1] - tt[i]);
    };
    value_ = std::make_shared<const std::function<double(double)>>(linear);
    prime_ = std::make_shared<const std::function<double(double)>>(slope);
    return;
  }
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  auto p = std::make_shared<Pchip>(std::vector<double>(t_), std::vector<double>(a_));
  value_ = std::make_shared<const std::function<double(double)>>([p](double x) { return (*p)(x); });
  prime_ = std::make_shared<const std::function<double(double)>>([p](double x) { return p->prime(x); });
}

double RampSchedule::a_at(double t) const {
  t = std::clamp(t, t_.front(), t_.back());
  if (staircase_) {
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - t_.begin()), a_.size() - 1);
    return a_[i == 0 ? 0 : i - 1];
  }
  return (*value_)(t);
}

double RampSchedule::rate_at(double t) const {
  if (staircase_) return 0.0;
  return (*prime_)(std::clamp(t, t_.front(), t_.back()));
}

std::vector<double> RampSchedule::breakpoints() const {
  if (!staircase_) return {t_.front(), t_.back()};
  return t_;
}

GammaSamples sample_gamma(const LinearHamiltonian& h, double a_start, double a_end, int count, int k,
                          int threads, double refine) {
  auto evaluate = [&](const std::vector<double>& a) {
    std::vector<double> gamma(a.size());
    util::parallel_for(a.size(), threads, [&](std::size_t i) { gamma[i] = adiabaticity_perturbative(h, a[i], k); });
    return gamma;
  };
  GammaSamples g{linspace(a_start, a_end, count), {}};
  g.gamma = evaluate(g.a);
  const double min_spacing = 1e-9 * std::abs(a_end - a_start);
  for (int pass = 0; refine > 0 && pass < 20; ++pass) {
    std::vector<double> mids;
    for (std::size_t i = 0; i + 1 < g.a.size(); ++i) {
      const double lo = std::min(g.gamma[i], g.gamma[i + 1]);
      const double hi = std::max(g.gamma[i], g.gamma[i + 1]);
      if (hi - lo > refine * lo && std::abs(g.a[i + 1] - g.a[i]) > min_spacing) mids.push_back(0.5 * (g.a[i] + g.a[i + 1]));
    }
    if (mids.empty()) break;
    const auto gm = evaluate(mids);
    GammaSamples merged;
    std::size_t j = 0;
    for (std::size_t i = 0; i < g.a.size(); ++i) {
      merged.a.push_back(g.a[i]);
      merged.gamma.push_back(g.gamma[i]);
      if (j < mids.size() && i + 1 < g.a.size() && mids[j] > g.a[i] && mids[j] < g.a[i + 1]) {
        merged.a.push_back(mids[j]);
        merged.gamma.push_back(gm[j]);
        ++j;
      }
    }
    g = std::move(merged);
  }
  return g;
}

RampSchedule build_ramp(double a_start, double a_end, double T, const GammaSamples& samples) {
  const auto n = samples.a.size();
  if (n < 200 || samples.gamma.size() != n) throw std::invalid_argument("build_ramp needs at least 200 gamma samples");
  if (samples.a.front() != a_start || samples.a.back() != a_end)
    throw std::invalid_argument("gamma samples must span [a_start, a_end]");
  if (!(T > 0)) throw std::invalid_argument("ramp duration must be positive");
  std::vector<double> t(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    if (!(samples.gamma[i] > 0) || !(samples.gamma[i - 1] > 0))
      throw std::invalid_argument("gamma samples must be positive");
    t[i] = t[i - 1] + 0.5 * (samples.gamma[i] + samples.gamma[i - 1]) * std::abs(samples.a[i] - samples.a[i - 1]);
  }
  const double scale = T / t.back();
  for (auto& x : t) x *= scale;
  t.back() = T;
  return {std::move(t), samples.a};
}

RampSchedule linear_ramp(double a_start, double a_end, double T, int samples) {
  return {linspace(0.0, T, samples), linspace(a_start, a_end, samples)};
}

RampSchedule frozen_ramp(double a, double T) { return {{0.0, T}, {a, a}}; }

RampSchedule reversed(const RampSchedule& s) {
  const auto& t = s.times();
  const auto& a = s.values();
  const double T = s.duration();
  std::vector<double> rt(t.size());
  std::vector<double> ra(a.size());
  if (s.staircase()) {
    // segment k of the reversed ramp holds the value of segment (m-1-k)
    const std::size_t m = t.size() - 1;
    for (std::size_t i = 0; i <= m; ++i) rt[i] = T - t[m - i];
    for (std::size_t i = 0; i < m; ++i) ra[i] = a[m - 1 - i];
    ra[m] = ra[m - 1];
    return {std::move(rt), std::move(ra), true};
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    rt[i] = T - t[t.size() - 1 - i];
    ra[i] = a[a.size() - 1 - i];
  }
  rt.front() = 0.0;
  return {std::move(rt), std::move(ra)};
}

RampSchedule concatenate(const RampSchedule& first, const RampSchedule& second) {
  if (first.staircase() || second.staircase()) throw std::invalid_argument("cannot concatenate staircases");
  if (std::abs(first.a_end() - second.a_start()) > 1e-15 * std::max(1.0, std::abs(first.a_end())))
    throw std::invalid_argument("ramps do not join");
  auto t = first.times();
  auto a = first.values();
  const double offset = first.duration();
  for (std::size_t i = 1; i < second.times().size(); ++i) {
    t.push_back(offset + second.times()[i]);
    a.push_back(second.values()[i]);
  }
  return {std::move(t), std::move(a)};
}

RampSchedule staircase(const RampSchedule& s, int segments) {
  if (segments < 1) throw std::invalid_argument("staircase needs at least one segment");
  const double T = s.duration();
  std::vector<double> t(static_cast<std::size_t>(segments) + 1);
  std::vector<double> a(t.size());
  for (int k = 0; k <= segments; ++k) t[k] = T * k / segments;
  for (int k = 0; k < segments; ++k) a[k] = s.a_at(0.5 * (t[k] + t[k + 1]));
  a[segments] = a[segments - 1];
  return {std::move(t), std::move(a), true};
}

}  // namespace exchlab::rotor
