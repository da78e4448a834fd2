#include "exchlab/ramsey/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "exchlab/errors.hpp"
#include "exchlab/util/parallel.hpp"

namespace exchlab::ramsey {

using fock::Amplitude;
using fock::ModeLabel;
using fock::Spin;
using std::numbers::pi;

ImpairedPrediction impaired_pulse_prediction(PulseStage stage, const ImpairedAngles& a) {
  ImpairedPrediction p;
  switch (stage) {
    case PulseStage::first_half_pi: {
      const double s = std::sin(a.theta);
      p.discarded = 1.0 - s * s / 2;
      break;
    }
    case PulseStage::middle_pi: {
      const double so = std::sin(a.theta_out / 2);
      const double ci = std::cos(a.theta_in / 2);
      p.discarded = 1.0 - so * so * ci * ci / 2;
      break;
    }
    case PulseStage::last_half_pi: {
      const double s = std::sin(a.theta);
      const double c = std::cos(a.theta);
      p.visibility = s * s;
      p.offset = -c * c;
      break;
    }
  }
  return p;
}

PulseBank impaired_bank(const SequencePlan& plan, PulseStage stage, const ImpairedAngles& angles) {
  PulseBank bank = ideal_pulse_bank(plan);
  const auto& ph = plan.phases;
  auto set = [&](const Site& site, double theta, bool left) {
    bank[stage][site] = pulse_unitary(stage, theta, ph.site_phase(stage, left));
  };
  switch (stage) {
    case PulseStage::first_half_pi:
      set(plan.L1, angles.theta, true);
      set(plan.R1, angles.theta, false);
      break;
    case PulseStage::middle_pi:
      set(plan.L3, angles.theta_out, true);
      set(plan.R3, angles.theta_out, false);
      set(plan.inner_left, angles.theta_in, true);
      set(plan.inner_right, angles.theta_in, false);
      break;
    case PulseStage::last_half_pi:
      set(plan.L2, angles.theta, true);
      set(plan.R2, angles.theta, false);
      break;
  }
  return bank;
}

ImpairedPrediction impaired_pulse_engine(PulseStage stage, const ImpairedAngles& angles,
                                         Statistics stats, int n) {
  const auto base = build_sequence(n, Variant::one_dim, {});
  std::vector<double> phi;
  std::vector<double> parity;
  double post_sum = 0.0;
  const auto grid = uniform_grid();
  for (double g : grid) {
    const auto plan = build_sequence(n, Variant::one_dim, base.phases.with(PulseStage::middle_pi, g));
    double par = 0.0;
    double post = 0.0;
    try {
      const auto r = run_sequence(plan, stats, impaired_bank(plan, stage, angles));
      par = r.parity;
      post = r.postselect_prob;
    } catch (const EmptyPostSelection&) {
    }
    phi.push_back(plan.phases.control_phase());
    parity.push_back(par);
    post_sum += post;
  }
  const double post = post_sum / static_cast<double>(grid.size());
  FringeFit fit;
  try {
    fit = fit_fringe(phi, parity);
  } catch (const DegenerateFit&) {
    fit.visibility = 0.0;
  }
  ImpairedPrediction p;
  if (stage == PulseStage::last_half_pi) {
    p.visibility = fit.visibility;
    p.offset = fit.offset;
  } else {
    p.discarded = 1.0 - post * fit.visibility;
  }
  return p;
}

// ---- thermal ----------------------------------------------------------------

namespace {

void check_probability(double p, const char* axis) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw NotDensityMatrix(std::string("ground-state probability for axis ") + axis +
                           " must lie in (0, 1], got " + std::to_string(p));
  }
}

void check_density_matrix(const Eigen::MatrixXcd& rho, const char* which) {
  const std::string name(which);
  if (rho.rows() == 0 || rho.rows() != rho.cols()) throw NotDensityMatrix(name + " is not square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw NotDensityMatrix(name + " is not Hermitian");
  if (std::abs(rho.trace() - Amplitude{1.0}) > 1e-9) throw NotDensityMatrix(name + " does not have unit trace");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-10) throw NotDensityMatrix(name + " is not positive");
}

}  // namespace

ThermalResult thermal_visibility(const ThermalOccupation& occ) {
  ThermalResult r;
  if (occ.rho_left || occ.rho_right) {
    if (!occ.rho_left || !occ.rho_right) throw NotDensityMatrix("both density matrices are required");
    check_density_matrix(*occ.rho_left, "rho_left");
    check_density_matrix(*occ.rho_right, "rho_right");
    if (occ.rho_left->rows() != occ.rho_right->rows()) throw NotDensityMatrix("density matrices differ in size");
    r.indistinguishable = (*occ.rho_left * *occ.rho_right).trace().real();
  } else {
    check_probability(occ.p0x, "x");
    check_probability(occ.p0y, "y");
    check_probability(occ.p0z, "z");
    r.indistinguishable = occ.p0() / ((2 - occ.p0x) * (2 - occ.p0y) * (2 - occ.p0z));
  }
  r.visibility = r.indistinguishable;
  return r;
}

Eigen::VectorXd thermal_populations(double p0, int levels) {
  Eigen::VectorXd p(levels);
  for (int k = 0; k < levels; ++k) p(k) = p0 * std::pow(1.0 - p0, k);
  return p;
}

Eigen::MatrixXcd thermal_density_matrix(const ThermalOccupation& occ, int levels) {
  check_probability(occ.p0x, "x");
  check_probability(occ.p0y, "y");
  check_probability(occ.p0z, "z");
  const auto px = thermal_populations(occ.p0x, levels);
  const auto py = thermal_populations(occ.p0y, levels);
  const auto pz = thermal_populations(occ.p0z, levels);
  const int dim = levels * levels * levels;
  Eigen::VectorXd w(dim);
  for (int vz = 0; vz < levels; ++vz)
    for (int vy = 0; vy < levels; ++vy)
      for (int vx = 0; vx < levels; ++vx) w(vx + levels * vy + levels * levels * vz) = px(vx) * py(vy) * pz(vz);
  w /= w.sum();
  return w.cast<Amplitude>().asDiagonal();
}

ThermalEngineResult thermal_fringe(const ThermalOccupation& occ, Statistics stats, int n, int levels) {
  Eigen::MatrixXcd rho_l;
  Eigen::MatrixXcd rho_r;
  ThermalEngineResult out;
  if (occ.rho_left || occ.rho_right) {
    (void)thermal_visibility(occ);
    rho_l = *occ.rho_left;
    rho_r = *occ.rho_right;
  } else {
    rho_l = thermal_density_matrix(occ, levels);
    rho_r = rho_l;
    out.truncation_weight = 1.0 - thermal_populations(occ.p0x, levels).sum() *
                                      thermal_populations(occ.p0y, levels).sum() *
                                      thermal_populations(occ.p0z, levels).sum();
  }
  out.truncated_closed_form = (rho_l * rho_r).trace().real();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> el(rho_l);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> er(rho_r);

  struct Component {
    double weight;
    std::vector<std::pair<ModeLabel, Amplitude>> modes;
  };
  auto components = [](const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& es, const Site& site) {
    std::vector<Component> out;
    for (Eigen::Index a = 0; a < es.eigenvalues().size(); ++a) {
      const double lambda = es.eigenvalues()(a);
      if (lambda < 1e-15) continue;
      Component c{lambda, {}};
      for (Eigen::Index v = 0; v < es.eigenvectors().rows(); ++v) {
        const Amplitude amp = es.eigenvectors()(v, a);
        if (std::abs(amp) > 1e-15) c.modes.push_back({{site, Spin::up, static_cast<int>(v)}, amp});
      }
      out.push_back(std::move(c));
    }
    return out;
  };

  const auto base = build_sequence(n, Variant::one_dim, {});
  const auto left = components(el, base.L1);
  const auto right = components(er, base.R1);
  const auto grid = uniform_grid();
  std::vector<double> phi;
  std::vector<double> parity;
  for (double g : grid) {
    const auto plan = build_sequence(n, Variant::one_dim, base.phases.with(PulseStage::middle_pi, g));
    const auto bank = ideal_pulse_bank(plan);
    double num = 0.0;
    double den = 0.0;
    for (const auto& cl : left) {
      for (const auto& cr : right) {
        const auto init = fock::product_state(cl.modes, cr.modes, stats);
        const auto r = run_from(plan, init, bank);
        const double w = cl.weight * cr.weight * r.postselect_prob;
        num += w * r.parity;
        den += w;
      }
    }
    phi.push_back(plan.phases.control_phase());
    parity.push_back(num / den);
  }
  out.fit = fit_fringe(phi, parity);
  return out;
}

// ---- dephasing --------------------------------------------------------------

const char* to_string(NoiseChannel c) {
  switch (c) {
    case NoiseChannel::none: return "none";
    case NoiseChannel::uniform_force: return "uniform_force";
    case NoiseChannel::uniform_field: return "uniform_field";
    case NoiseChannel::static_gradient: return "static_gradient";
    case NoiseChannel::transport_phase: return "transport_phase";
    case NoiseChannel::fast_gradient: return "fast_gradient";
  }
  return "?";
}

NoiseChannel noise_channel_from_string(const std::string& s) {
  for (auto c : {NoiseChannel::none, NoiseChannel::uniform_force, NoiseChannel::uniform_field,
                 NoiseChannel::static_gradient, NoiseChannel::transport_phase, NoiseChannel::fast_gradient}) {
    if (s == to_string(c)) return c;
  }
  throw ConfigInvalid("unknown noise channel '" + s + "'");
}

NoiseRealization sample_noise(const NoiseModel& model, const SequencePlan& plan, std::mt19937_64& rng) {
  NoiseRealization r;
  const Eigen::Vector2d axis = model.axis.normalized();
  r.force_axis = axis;
  r.gradient_axis = axis;
  const auto shifts = static_cast<std::size_t>(plan.shifts_before_pi + plan.shifts_after_pi);
  std::normal_distribution<double> gauss(0.0, model.scale);
  std::normal_distribution<double> offset(0.0, static_cast<double>(plan.n));
  auto draw = [&](std::vector<double>& v) {
    v.resize(shifts);
    for (auto& x : v) x = gauss(rng);
  };
  switch (model.channel) {
    case NoiseChannel::none: break;
    case NoiseChannel::uniform_force: draw(r.force); break;
    case NoiseChannel::uniform_field: draw(r.field); break;
    case NoiseChannel::static_gradient:
      r.gradient_up = gauss(rng);
      r.gradient_down = gauss(rng);
      r.x0_up = offset(rng);
      r.x0_down = offset(rng);
      break;
    case NoiseChannel::transport_phase:
      draw(r.transport_up);
      draw(r.transport_down);
      break;
    case NoiseChannel::fast_gradient:
      draw(r.fast_gradient_up);
      draw(r.fast_gradient_down);
      r.x0_up = offset(rng);
      r.x0_down = offset(rng);
      break;
  }
  return r;
}

DephasingReport dephasing_audit(const SequencePlan& plan, Statistics stats, const NoiseModel& model,
                                int trials, std::uint64_t seed, int threads) {
  const BankFactory ideal = [](const SequencePlan& p) { return ideal_pulse_bank(p); };
  DephasingReport report;
  report.nominal_phase = fringe_scan(plan, stats, ideal).fit.phase;
  report.deviations.assign(static_cast<std::size_t>(std::max(trials, 0)), 0.0);
  util::parallel_for(report.deviations.size(), threads, [&](std::size_t t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    const auto noise = sample_noise(model, plan, rng);
    const auto fit = fringe_scan(plan, stats, ideal, uniform_grid(), PulseStage::middle_pi, &noise).fit;
    report.deviations[t] = std::abs(wrap_to_pi(fit.phase - report.nominal_phase));
  });
  for (double d : report.deviations) report.max_deviation = std::max(report.max_deviation, d);
  return report;
}

}  // namespace exchlab::ramsey
