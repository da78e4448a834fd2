#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>

#include "exchlab/ramsey/run.hpp"

namespace exchlab::ramsey {

// ---- impaired pulses ------------------------------------------------------

struct ImpairedAngles {
  double theta = 0.0;      ///< first or last pi/2 pulse area
  double theta_out = 0.0;  ///< middle pulse area on the outer components
  double theta_in = 0.0;   ///< middle pulse area on the inner components
};

struct ImpairedPrediction {
  std::optional<double> discarded;  ///< stages 1 and 2
  std::optional<double> visibility; ///< stage 3
  std::optional<double> offset;     ///< stage 3
};

/// Closed forms: first pulse 1 - sin^2(theta)/2, middle pulse
/// 1 - sin^2(theta_out/2) cos^2(theta_in/2)/2, last pulse (sin^2 theta, -cos^2 theta).
[[nodiscard]] ImpairedPrediction impaired_pulse_prediction(PulseStage stage, const ImpairedAngles& angles);

/// Ideal bank with the impaired stage replaced. For the middle stage the
/// inner sites also receive a pulse of area theta_in.
[[nodiscard]] PulseBank impaired_bank(const SequencePlan& plan, PulseStage stage,
                                      const ImpairedAngles& angles);

/// The same quantities measured by fringe scans through the engine. The
/// discarded fraction is 1 - postselect_prob * V.
[[nodiscard]] ImpairedPrediction impaired_pulse_engine(PulseStage stage, const ImpairedAngles& angles,
                                                       Statistics stats, int n = 10);

// ---- thermal occupation ---------------------------------------------------

struct ThermalOccupation {
  double p0x = 1.0;
  double p0y = 1.0;
  double p0z = 1.0;
  std::optional<Eigen::MatrixXcd> rho_left;
  std::optional<Eigen::MatrixXcd> rho_right;

  static ThermalOccupation isotropic(double p0_axis) { return {p0_axis, p0_axis, p0_axis, {}, {}}; }
  [[nodiscard]] double p0() const noexcept { return p0x * p0y * p0z; }
};

struct ThermalResult {
  double indistinguishable = 0.0;  ///< P_indist
  double visibility = 0.0;
};

/// V = p0 / ((2-p0x)(2-p0y)(2-p0z)) for thermal states, tr(rho_L rho_R)
/// when density matrices are given. Throws NotDensityMatrix.
[[nodiscard]] ThermalResult thermal_visibility(const ThermalOccupation& occ);

/// Thermal vibrational distribution of one axis truncated to `levels`,
/// p_k = p0 (1 - p0)^k, not renormalised.
[[nodiscard]] Eigen::VectorXd thermal_populations(double p0, int levels);

/// Diagonal three-axis thermal density matrix over levels^3 states, index
/// vx + levels*vy + levels^2*vz, renormalised on the truncated space.
[[nodiscard]] Eigen::MatrixXcd thermal_density_matrix(const ThermalOccupation& occ, int levels = 3);

struct ThermalEngineResult {
  FringeFit fit;
  double truncated_closed_form = 0.0;  ///< tr(rho_L rho_R) on the truncated space
  double truncation_weight = 0.0;      ///< thermal weight outside the truncated space
};

/// Fringe of the mixed initial state rho_L (x) rho_R, obtained by running every
/// pair of eigenvectors through the engine and mixing parities by weight.
[[nodiscard]] ThermalEngineResult thermal_fringe(const ThermalOccupation& occ, Statistics stats,
                                                 int n = 10, int levels = 3);

// ---- dephasing ------------------------------------------------------------

enum class NoiseChannel {
  none,
  uniform_force,
  uniform_field,
  static_gradient,
  transport_phase,
  fast_gradient,
};

[[nodiscard]] const char* to_string(NoiseChannel c);
[[nodiscard]] NoiseChannel noise_channel_from_string(const std::string& s);

struct NoiseModel {
  NoiseChannel channel = NoiseChannel::none;
  double scale = 1.0;  ///< standard deviation of the drawn phases, rad
  Eigen::Vector2d axis{1.0, 0.0};
};

[[nodiscard]] NoiseRealization sample_noise(const NoiseModel& model, const SequencePlan& plan,
                                            std::mt19937_64& rng);

struct DephasingReport {
  double max_deviation = 0.0;
  double nominal_phase = 0.0;
  std::vector<double> deviations;
};

/// Fits one fringe per realization and reports |phi_fit - phi_fit(noise-free)|.
/// Trials are seeded from `seed` + trial index and run on up to `threads` workers.
[[nodiscard]] DephasingReport dephasing_audit(const SequencePlan& plan, Statistics stats,
                                              const NoiseModel& model, int trials,
                                              std::uint64_t seed, int threads = 1);

}  // namespace exchlab::ramsey
