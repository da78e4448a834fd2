#include "exchlab/ramsey/run.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "exchlab/errors.hpp"

namespace exchlab::ramsey {

using fock::Amplitude;
using fock::ModeLabel;
using fock::Spin;
using fock::TwoParticleState;
using std::numbers::pi;

namespace {

double at(const std::vector<double>& v, std::size_t k) { return k < v.size() ? v[k] : 0.0; }

}  // namespace

double NoiseRealization::energy(std::size_t k, const Eigen::Vector2d& r, Spin spin) const {
  const double s = fock::spin_sign(spin);
  const double xi = r.dot(gradient_axis);
  double e = at(force, k) * r.dot(force_axis) + at(field, k) * s / 2;
  if (spin == Spin::up) {
    e += at(transport_up, k) + (gradient_up + at(fast_gradient_up, k)) * (xi - x0_up);
  } else {
    e += at(transport_down, k) - (gradient_down + at(fast_gradient_down, k)) * (xi - x0_down);
  }
  return e;
}

TwoParticleState initial_state(const SequencePlan& plan, Statistics stats, int vib_left, int vib_right) {
  TwoParticleState s(stats);
  s.accumulate({plan.L1, Spin::up, vib_left}, {plan.R1, Spin::up, vib_right}, 1.0);
  return s;
}

TwoParticleState evolve(const SequencePlan& plan, const TwoParticleState& initial,
                        const PulseBank& bank, const NoiseRealization* noise) {
  TwoParticleState state = initial;
  std::size_t shift_index = 0;
  for (const auto& step : plan.steps) {
    if (const auto* shift = std::get_if<ShiftStep>(&step)) {
      fock::ModeMap map;
      for (const auto& m : state.occupied_modes()) {
        const Site d = m.spin == Spin::up ? shift->up : shift->down;
        Amplitude factor{1.0};
        if (noise) {
          const Eigen::Vector2d mid(m.site.x + 0.5 * d.x, m.site.y + 0.5 * d.y);
          factor = std::polar(1.0, -noise->energy(shift_index, mid, m.spin));
        }
        map.set(m, {{ModeLabel{m.site + d, m.spin, m.vib}, factor}});
      }
      state = fock::apply_mode_map(state, map);
      ++shift_index;
    } else if (const auto* pulse = std::get_if<PulseStep>(&step)) {
      auto it = bank.find(pulse->stage);
      if (it == bank.end()) continue;
      for (const auto& [site, u] : it->second) state = fock::apply_local_unitary(state, site, u);
    }
  }
  return state;
}

RunResult run_from(const SequencePlan& plan, const TwoParticleState& initial, const PulseBank& bank,
                   const NoiseRealization* noise) {
  RunResult r;
  r.final_state = evolve(plan, initial, bank, noise);
  const auto parity = fock::spin_parity(r.final_state, plan.L2, plan.R2);
  r.parity = parity.parity;
  r.postselect_prob = parity.probability;

  const auto left = fock::same_site_parity(r.final_state, plan.L2);
  const auto right = fock::same_site_parity(r.final_state, plan.R2);
  r.same_site_prob = left.probability + right.probability;
  if (r.same_site_prob > 0.0) {
    r.same_site_parity =
        (left.parity * left.probability + right.parity * right.probability) / r.same_site_prob;
  }

  const double total = r.final_state.norm_squared();
  for (const auto& [key, amp] : r.final_state.terms()) {
    r.outcomes.push_back({key.first, key.second, r.final_state.multiplicity(key) * std::norm(amp) / total});
  }
  return r;
}

RunResult run_sequence(const SequencePlan& plan, Statistics stats, const PulseBank& bank,
                       const NoiseRealization* noise) {
  return run_from(plan, initial_state(plan, stats), bank, noise);
}

double wrap_to_pi(double angle) { return std::remainder(angle, 2 * pi); }

double wrap_to_2pi(double angle) {
  double a = std::fmod(angle, 2 * pi);
  if (a < 0) a += 2 * pi;
  if (a >= 2 * pi) a -= 2 * pi;
  return a;
}

std::vector<double> uniform_grid(int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = 2 * pi * i / points;
  return g;
}

FringeFit fit_fringe(const std::vector<double>& phi, const std::vector<double>& parity) {
  const auto m = static_cast<Eigen::Index>(phi.size());
  if (m < 3 || phi.size() != parity.size()) throw DegenerateFit("need at least three fringe points");
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(phi[i]);
    design(i, 2) = std::sin(phi[i]);
    y(i) = parity[i];
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(y);
  FringeFit fit;
  fit.visibility = std::hypot(c(1), c(2));
  if (fit.visibility < 1e-12) throw DegenerateFit("fringe amplitude below 1e-12");
  fit.phase = wrap_to_2pi(std::atan2(-c(2), -c(1)));
  fit.offset = c(0);
  fit.residual = std::sqrt((design * c - y).squaredNorm() / static_cast<double>(m));
  return fit;
}

FringeScan fringe_scan(const SequencePlan& plan, Statistics stats, const BankFactory& bank_factory,
                       const std::vector<double>& grid, PulseStage scanned,
                       const NoiseRealization* noise) {
  FringeScan scan;
  std::vector<double> control;
  std::vector<double> parity;
  for (double g : grid) {
    const auto p = build_sequence(plan.n, plan.variant, plan.phases.with(scanned, g), plan.layout);
    const auto r = run_sequence(p, stats, bank_factory(p), noise);
    scan.samples.push_back({g, p.phases.control_phase(), r.parity, r.postselect_prob});
    control.push_back(p.phases.control_phase());
    parity.push_back(r.parity);
  }
  scan.fit = fit_fringe(control, parity);
  const double others = plan.phases.control_phase() - plan.phases.relative(scanned);
  scan.fit.scan_phase = wrap_to_2pi(scan.fit.phase - others);
  return scan;
}

}  // namespace exchlab::ramsey
