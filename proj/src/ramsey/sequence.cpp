#include "exchlab/ramsey/sequence.hpp"

#include <cmath>
#include <numbers>

#include "exchlab/errors.hpp"

namespace exchlab::ramsey {

using std::numbers::pi;

const char* to_string(Variant v) { return v == Variant::one_dim ? "one_dim" : "two_dim"; }

const char* to_string(InnerLayout l) { return l == InnerLayout::crossed ? "crossed" : "uncrossed"; }

const char* to_string(PulseStage s) {
  switch (s) {
    case PulseStage::first_half_pi: return "first_half_pi";
    case PulseStage::middle_pi: return "middle_pi";
    case PulseStage::last_half_pi: return "last_half_pi";
  }
  return "?";
}

double PhaseSettings::relative(PulseStage stage) const noexcept {
  switch (stage) {
    case PulseStage::first_half_pi: return dphi1;
    case PulseStage::middle_pi: return dphi3;
    case PulseStage::last_half_pi: return dphi2;
  }
  return 0.0;
}

PhaseSettings PhaseSettings::with(PulseStage stage, double value) const noexcept {
  PhaseSettings out = *this;
  switch (stage) {
    case PulseStage::first_half_pi: out.dphi1 = value; break;
    case PulseStage::middle_pi: out.dphi3 = value; break;
    case PulseStage::last_half_pi: out.dphi2 = value; break;
  }
  return out;
}

namespace {

PulseStep pulse_step(PulseStage stage, double angle, const PhaseSettings& phases, const Site& left,
                     const Site& right) {
  return {stage, angle,
          {{left, phases.site_phase(stage, true)}, {right, phases.site_phase(stage, false)}}};
}

}  // namespace

SequencePlan build_sequence(int n, Variant variant, const PhaseSettings& phases, InnerLayout layout) {
  if (n < 2 || n % 2 != 0) {
    throw BadSeparation("separation must be even and at least 2, got " + std::to_string(n));
  }
  SequencePlan plan;
  plan.n = n;
  plan.variant = variant;
  plan.phases = phases;
  plan.layout = layout;
  const int h = n / 2;

  std::vector<ShiftStep> before;
  std::vector<ShiftStep> after;
  if (variant == Variant::one_dim && layout == InnerLayout::uncrossed) {
    plan.L1 = {-(h + 1), 0};
    plan.R1 = {h + 1, 0};
    plan.L3 = {-(n + 1), 0};
    plan.R3 = {n + 1, 0};
    plan.inner_left = {-1, 0};
    plan.inner_right = {1, 0};
    plan.L2 = {-h, 0};
    plan.R2 = {h, 0};
    before.assign(h, ShiftStep{{1, 0}, {-1, 0}});
    after.assign(h + 1, ShiftStep{{1, 0}, {-1, 0}});
  } else if (variant == Variant::one_dim) {
    plan.L1 = {-h, 0};
    plan.R1 = {h, 0};
    plan.L3 = {-(n + 1), 0};
    plan.R3 = {n + 1, 0};
    plan.inner_left = {1, 0};
    plan.inner_right = {-1, 0};
    plan.L2 = {-(h + 1), 0};
    plan.R2 = {h + 1, 0};
    before.assign(h + 1, ShiftStep{{1, 0}, {-1, 0}});
    after.assign(h, ShiftStep{{1, 0}, {-1, 0}});
  } else {
    plan.L1 = {-h, h};
    plan.R1 = {h, -h};
    plan.L3 = {-3 * h, 3 * h};
    plan.R3 = {3 * h, -3 * h};
    plan.inner_left = {h, -h};
    plan.inner_right = {-h, h};
    plan.L2 = {-n, n};
    plan.R2 = {n, -n};
    before.assign(n, ShiftStep{{1, 0}, {-1, 0}});
    before.insert(before.end(), n, ShiftStep{{0, -1}, {0, 1}});
    after.assign(h, ShiftStep{{1, -1}, {-1, 1}});
  }
  plan.shifts_before_pi = static_cast<int>(before.size());
  plan.shifts_after_pi = static_cast<int>(after.size());

  plan.steps.push_back(pulse_step(PulseStage::first_half_pi, pi / 2, phases, plan.L1, plan.R1));
  for (const auto& s : before) plan.steps.push_back(s);
  plan.steps.push_back(pulse_step(PulseStage::middle_pi, pi, phases, plan.L3, plan.R3));
  for (const auto& s : after) plan.steps.push_back(s);
  plan.steps.push_back(pulse_step(PulseStage::last_half_pi, pi / 2, phases, plan.L2, plan.R2));
  plan.steps.push_back(ReadoutStep{plan.L2, plan.R2});
  return plan;
}

SpinMatrix rotation(double theta, double alpha) {
  using C = std::complex<double>;
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const C i{0.0, 1.0};
  SpinMatrix u;
  u << c, -i * s * std::exp(-i * alpha), -i * s * std::exp(i * alpha), c;
  return u;
}

SpinMatrix pulse_unitary(PulseStage stage, double theta, double phase) {
  const double alpha = stage == PulseStage::middle_pi ? -phase - pi / 2 : phase - pi / 2;
  return rotation(theta, alpha);
}

PulseBank ideal_pulse_bank(const SequencePlan& plan) {
  PulseBank bank;
  for (const auto& step : plan.steps) {
    const auto* p = std::get_if<PulseStep>(&step);
    if (!p) continue;
    for (const auto& t : p->targets) bank[p->stage][t.site] = pulse_unitary(p->stage, p->angle, t.phase);
  }
  return bank;
}

std::vector<std::array<Site, 4>> component_paths(const SequencePlan& plan) {
  // Components are tracked by their current spin; the middle pulse flips the
  // outer ones, the half-pi pulses only split, so spins follow the labels
  // until the middle pulse.
  std::array<Site, 4> pos{plan.L1, plan.L1, plan.R1, plan.R1};
  std::array<fock::Spin, 4> spin{fock::Spin::up, fock::Spin::down, fock::Spin::up, fock::Spin::down};
  std::vector<std::array<Site, 4>> out{pos};
  for (const auto& step : plan.steps) {
    if (const auto* s = std::get_if<ShiftStep>(&step)) {
      for (int c = 0; c < 4; ++c) pos[c] = pos[c] + (spin[c] == fock::Spin::up ? s->up : s->down);
      out.push_back(pos);
    } else if (const auto* p = std::get_if<PulseStep>(&step); p && p->stage == PulseStage::middle_pi) {
      for (int c = 0; c < 4; ++c)
        if (pos[c] == plan.L3 || pos[c] == plan.R3) spin[c] = fock::flipped(spin[c]);
    }
  }
  return out;
}

}  // namespace exchlab::ramsey
