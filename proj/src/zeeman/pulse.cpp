#include "exchlab/zeeman/pulse.hpp"

#include <cmath>
#include <numbers>

#include "exchlab/errors.hpp"
#include "exchlab/ramsey/run.hpp"
#include "exchlab/util/parallel.hpp"

namespace exchlab::zeeman {

using C = std::complex<double>;
using std::numbers::pi;

double GradientPulseConfig::pulse_duration() const noexcept {
  return duration > 0.0 ? duration : pi / omega_R;
}

double GradientPulseConfig::rho() const noexcept { return delta_prime * (n + 1) / omega_R; }

GradientPulseConfig GradientPulseConfig::from_rho(int n, double rho, double omega_R) {
  GradientPulseConfig cfg;
  cfg.n = n;
  cfg.omega_R = omega_R;
  cfg.delta_prime = rho * omega_R / (n + 1);
  return cfg;
}

std::vector<Site> default_sites(int n) { return {{-(n + 1), 0}, {-1, 0}, {1, 0}, {n + 1, 0}}; }

namespace {

struct Tone {
  double detuning;  // tone frequency minus the static detuning at the site
  C coupling;       // (omega_R/2) e^{i beta}
};

std::vector<Tone> tones_at(const GradientPulseConfig& cfg, int x) {
  const double w = cfg.delta_prime * (cfg.n + 1);
  const double local = cfg.delta_prime * x;
  std::vector<Tone> out;
  if (cfg.tones != ToneSet::right_only)
    out.push_back({-w - local, cfg.omega_R / 2 * std::polar(1.0, cfg.phi_L3 + pi / 2)});
  if (cfg.tones != ToneSet::left_only)
    out.push_back({w - local, cfg.omega_R / 2 * std::polar(1.0, cfg.phi_R3 + pi / 2)});
  return out;
}

// Interaction-frame coupling: V(t) = [[0, f(t)], [conj f(t), 0]].
C off_diagonal(const std::vector<Tone>& tones, double t) {
  C f{};
  for (const auto& tone : tones) f += tone.coupling * std::polar(1.0, -tone.detuning * t);
  return f;
}

SpinMatrix derivative(const std::vector<Tone>& tones, double t, const SpinMatrix& u) {
  const C f = off_diagonal(tones, t);
  SpinMatrix v;
  v << 0.0, f, std::conj(f), 0.0;
  return C{0.0, -1.0} * (v * u);
}

SpinMatrix rk4(const std::vector<Tone>& tones, double duration, long steps) {
  const double h = duration / static_cast<double>(steps);
  SpinMatrix u = SpinMatrix::Identity();
  for (long k = 0; k < steps; ++k) {
    const double t = h * static_cast<double>(k);
    const SpinMatrix k1 = derivative(tones, t, u);
    const SpinMatrix k2 = derivative(tones, t + h / 2, u + h / 2 * k1);
    const SpinMatrix k3 = derivative(tones, t + h / 2, u + h / 2 * k2);
    const SpinMatrix k4 = derivative(tones, t + h, u + h * k3);
    u += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

}  // namespace

SiteUnitaryBank simulate_gradient_pulse(const GradientPulseConfig& cfg, const std::vector<Site>& sites) {
  if (!(cfg.omega_R > 0.0)) throw IntegratorFailure("omega_R must be positive");
  const double duration = cfg.pulse_duration();
  SiteUnitaryBank bank;
  for (const auto& site : sites) {
    const auto tones = tones_at(cfg, site.x);
    double fastest = std::max(cfg.omega_R, std::abs(cfg.delta_prime) * (cfg.n + 1));
    for (const auto& tone : tones) fastest = std::max(fastest, std::abs(tone.detuning));
    const double h_max = 2 * pi / (200 * fastest);
    long steps = std::max<long>(16, static_cast<long>(std::ceil(duration / h_max)));

    SpinMatrix coarse = rk4(tones, duration, steps);
    SpinMatrix fine = rk4(tones, duration, 2 * steps);
    double err = (fine - coarse).cwiseAbs().maxCoeff() / 15;
    for (int refine = 0; err > cfg.tolerance && refine < 8; ++refine) {
      steps *= 2;
      coarse = fine;
      fine = rk4(tones, duration, 2 * steps);
      err = (fine - coarse).cwiseAbs().maxCoeff() / 15;
    }
    if (err > cfg.tolerance) {
      throw IntegratorFailure("pulse propagator at site " + fock::to_string(site) +
                              " did not reach tolerance, error estimate " + std::to_string(err));
    }

    const double zeeman = cfg.delta_prime * site.x * duration / 2;
    SpinMatrix lab = fine;
    lab.row(0) *= std::polar(1.0, -zeeman);
    lab.row(1) *= std::polar(1.0, zeeman);

    bank.unitaries[site] = lab;
    bank.max_richardson_error = std::max(bank.max_richardson_error, err);
    bank.max_unitarity_defect = std::max(
        bank.max_unitarity_defect, (lab.adjoint() * lab - SpinMatrix::Identity()).cwiseAbs().maxCoeff());
    bank.steps = std::max(bank.steps, static_cast<int>(2 * steps));
  }
  const int outer = cfg.n + 1;
  if (bank.unitaries.contains({1, 0}) && bank.unitaries.contains({-1, 0}) &&
      bank.unitaries.contains({outer, 0}) && bank.unitaries.contains({-outer, 0})) {
    bank.p_err = p_err(bank, cfg.n, cfg.layout);
  }
  return bank;
}

SiteUnitaryBank simulate_gradient_pulse(const GradientPulseConfig& cfg) {
  return simulate_gradient_pulse(cfg, default_sites(cfg.n));
}

double p_err(const SiteUnitaryBank& bank, int n, ramsey::InnerLayout layout) {
  const auto& u = bank.unitaries;
  const int side = layout == ramsey::InnerLayout::crossed ? 1 : -1;
  const SpinMatrix& left_inner = u.at({side, 0});    // left particle, up component
  const SpinMatrix& right_inner = u.at({-side, 0});  // right particle, down component
  const SpinMatrix& left_outer = u.at({-(n + 1), 0});
  const SpinMatrix& right_outer = u.at({n + 1, 0});
  const double stay = std::norm(left_inner(0, 0)) * std::norm(right_inner(1, 1));
  const double flip = std::norm(left_outer(0, 1)) * std::norm(right_outer(1, 0));
  return 1.0 - (stay + flip) / 2;
}

double p_err(const GradientPulseConfig& cfg) { return simulate_gradient_pulse(cfg).p_err; }

double ac_shift_closed_form(int n, double rho) {
  return -pi * (n + 1) / (static_cast<double>(n) * (n + 2)) / rho;
}

double zeeman_static_phase(int n, double delta_prime, double omega_R) {
  return -n * pi * delta_prime / omega_R;
}

double layout_zeeman_phase(const GradientPulseConfig& cfg) {
  const auto plan = ramsey::build_sequence(cfg.n, ramsey::Variant::one_dim, {}, cfg.layout);
  const double span = (plan.R3.x - plan.L3.x) + (plan.inner_left.x - plan.inner_right.x);
  return -cfg.delta_prime * cfg.pulse_duration() * span / 2;
}

PhaseCorrection fringe_phase_correction(const GradientPulseConfig& cfg, fock::Statistics stats) {
  using namespace ramsey;
  const auto simulated = simulate_gradient_pulse(cfg);
  PhaseSettings phases;
  phases.dphi3 = cfg.phi_L3 - cfg.phi_R3;
  const auto plan = build_sequence(cfg.n, Variant::one_dim, phases, cfg.layout);
  const BankFactory factory = [&](const SequencePlan& p) {
    PulseBank bank = ideal_pulse_bank(p);
    bank[PulseStage::middle_pi] = simulated.unitaries;
    return bank;
  };
  const auto scan = fringe_scan(plan, stats, factory, uniform_grid(), PulseStage::first_half_pi);
  PhaseCorrection out;
  out.fitted_phase = scan.fit.phase;
  out.visibility = scan.fit.visibility;
  out.zeeman_phase = layout_zeeman_phase(cfg);
  out.residual = wrap_to_pi(out.fitted_phase - stats.exchange_phase() - out.zeeman_phase);
  double post = 0.0;
  for (const auto& s : scan.samples) post += s.postselect_prob;
  out.postselect_prob = post / static_cast<double>(scan.samples.size());
  return out;
}

std::vector<ScanRow> zeeman_scan(int n, const std::vector<double>& rhos, double omega_R, int threads) {
  std::vector<ScanRow> rows(rhos.size());
  util::parallel_for(rhos.size(), threads, [&](std::size_t i) {
    const auto cfg = GradientPulseConfig::from_rho(n, rhos[i], omega_R);
    const auto corr = fringe_phase_correction(cfg);
    rows[i] = {rhos[i], p_err(cfg), corr.residual, ac_shift_closed_form(n, rhos[i]),
               1.0 - corr.postselect_prob};
  });
  return rows;
}

}  // namespace exchlab::zeeman
