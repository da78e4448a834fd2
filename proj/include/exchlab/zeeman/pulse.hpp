#pragma once

#include <map>
#include <vector>

#include "exchlab/ramsey/sequence.hpp"

namespace exchlab::zeeman {

using fock::Site;
using fock::SpinMatrix;

enum class ToneSet { both, left_only, right_only };

/// Gradient-addressed middle pi pulse. Site x has static detuning delta' x;
/// the tone addressing L3 = -(n+1) sits at -delta'(n+1) with phase phi_L3 and
/// the one addressing R3 = n+1 at +delta'(n+1) with phase phi_R3.
struct GradientPulseConfig {
  double omega_R = 1.0;      ///< Rabi angular frequency of one tone, rad/s
  double delta_prime = 0.0;  ///< detuning per lattice site, rad/s
  int n = 10;
  double phi_L3 = 0.0;
  double phi_R3 = 0.0;
  double duration = 0.0;     ///< s; 0 selects pi/omega_R
  ToneSet tones = ToneSet::both;
  /// Sequence layout the pulse is embedded in. The default places each
  /// particle's inner component on its own side, at -1 (left) and +1 (right).
  ramsey::InnerLayout layout = ramsey::InnerLayout::uncrossed;
  double tolerance = 1e-10;  ///< Richardson error bound on each propagator

  [[nodiscard]] double pulse_duration() const noexcept;
  [[nodiscard]] double rho() const noexcept;

  /// Config with delta' chosen so that delta'(n+1)/omega_R = rho.
  [[nodiscard]] static GradientPulseConfig from_rho(int n, double rho, double omega_R = 1.0);
};

struct SiteUnitaryBank {
  std::map<Site, SpinMatrix> unitaries;
  double p_err = 0.0;  ///< filled when both inner and outer sites are present
  double max_unitarity_defect = 0.0;
  double max_richardson_error = 0.0;
  int steps = 0;  ///< RK4 steps used on the finest grid
};

/// Default site list {-(n+1), -1, 1, n+1}.
[[nodiscard]] std::vector<Site> default_sites(int n);

/// Propagator of H = (delta' x / 2) Z + sum_j (omega_R / 2)(e^{-i(w_j t - phi_j - pi/2)} s+ + h.c.)
/// over the pulse, integrated with fixed-step RK4 in the frame rotating with
/// the static detuning and checked by step halving. Throws IntegratorFailure.
[[nodiscard]] SiteUnitaryBank simulate_gradient_pulse(const GradientPulseConfig& cfg,
                                                      const std::vector<Site>& sites);

[[nodiscard]] SiteUnitaryBank simulate_gradient_pulse(const GradientPulseConfig& cfg);

/// Probability that the middle pulse leaves a component off the L2/R2 paths:
/// 1 - (|U(xl)_uu|^2 |U(xr)_dd|^2 + |U(-(n+1))_ud|^2 |U(n+1)_du|^2) / 2, where
/// xl and xr are the inner sites of the left (up) and right (down) components.
[[nodiscard]] double p_err(const GradientPulseConfig& cfg);
[[nodiscard]] double p_err(const SiteUnitaryBank& bank, int n,
                           ramsey::InnerLayout layout = ramsey::InnerLayout::uncrossed);

/// -pi (n+1) / (n (n+2)) / rho
[[nodiscard]] double ac_shift_closed_form(int n, double rho);

/// -n pi delta' / omega_R
[[nodiscard]] double zeeman_static_phase(int n, double delta_prime, double omega_R);

/// Zeeman phase accumulated during the pulse by the outer pair relative to
/// the inner pair, for the sites of `layout`. Equals zeeman_static_phase for
/// the uncrossed layout and -(n+2) pi delta' / omega_R for the crossed one.
[[nodiscard]] double layout_zeeman_phase(const GradientPulseConfig& cfg);

struct PhaseCorrection {
  double fitted_phase = 0.0;  ///< fringe phase in control-phase coordinates
  double zeeman_phase = 0.0;
  double residual = 0.0;      ///< fitted - exchange - Zeeman, wrapped to (-pi, pi]
  double visibility = 0.0;
  double postselect_prob = 0.0;
};

/// Runs the 1D sequence with the simulated middle pulse and fits the fringe
/// by scanning the first-pulse phase.
[[nodiscard]] PhaseCorrection fringe_phase_correction(const GradientPulseConfig& cfg,
                                                      fock::Statistics stats = fock::Statistics::boson());

struct ScanRow {
  double rho = 0.0;
  double p_err = 0.0;
  double residual_phase = 0.0;
  double closed_form = 0.0;
  double discarded = 0.0;
};

[[nodiscard]] std::vector<ScanRow> zeeman_scan(int n, const std::vector<double>& rhos,
                                               double omega_R = 1.0, int threads = 1);

}  // namespace exchlab::zeeman
