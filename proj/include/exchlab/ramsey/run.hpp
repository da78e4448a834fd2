#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "exchlab/ramsey/sequence.hpp"

namespace exchlab::ramsey {

using fock::Statistics;

/// Phase bookkeeping for noise during transport. Each shift multiplies every
/// mode by exp(-i E), with E evaluated at the midpoint of the move:
///
///   E = force[k] (r . f) + field[k] s/2 + transport_s[k]
///       + up:   (g_up + dg_up[k])   (r . g - x0_up)
///       + down: -(g_down + dg_down[k]) (r . g - x0_down)
///
/// where s = +1 for up and -1 for down. Per-step vectors shorter than the
/// number of shifts are treated as zero past their end.
struct NoiseRealization {
  Eigen::Vector2d force_axis{1.0, 0.0};
  Eigen::Vector2d gradient_axis{1.0, 0.0};

  std::vector<double> force;
  std::vector<double> field;
  std::vector<double> transport_up;
  std::vector<double> transport_down;

  double gradient_up = 0.0;
  double gradient_down = 0.0;
  double x0_up = 0.0;
  double x0_down = 0.0;

  std::vector<double> fast_gradient_up;
  std::vector<double> fast_gradient_down;

  /// Phase picked up by a mode of spin `spin` at midpoint `r` during shift `k`.
  [[nodiscard]] double energy(std::size_t k, const Eigen::Vector2d& r, fock::Spin spin) const;
};

struct Outcome {
  fock::ModeLabel first;
  fock::ModeLabel second;
  double probability = 0.0;
};

struct RunResult {
  double parity = 0.0;
  double postselect_prob = 0.0;
  double same_site_prob = 0.0;    ///< both particles at L2 or both at R2
  double same_site_parity = 0.0;  ///< parity within that branch
  std::vector<Outcome> outcomes;
  fock::TwoParticleState final_state;
};

/// Initial state a†_{L1,up,vL} a†_{R1,up,vR} |0>.
[[nodiscard]] fock::TwoParticleState initial_state(const SequencePlan& plan, Statistics stats,
                                                   int vib_left = 0, int vib_right = 0);

[[nodiscard]] fock::TwoParticleState evolve(const SequencePlan& plan,
                                            const fock::TwoParticleState& initial,
                                            const PulseBank& bank,
                                            const NoiseRealization* noise = nullptr);

[[nodiscard]] RunResult run_sequence(const SequencePlan& plan, Statistics stats,
                                     const PulseBank& bank,
                                     const NoiseRealization* noise = nullptr);

/// Same as run_sequence but starting from an arbitrary state.
[[nodiscard]] RunResult run_from(const SequencePlan& plan, const fock::TwoParticleState& initial,
                                 const PulseBank& bank, const NoiseRealization* noise = nullptr);

/// Fit of Pi(phi) = -V cos(phi - phi_fit) + offset.
struct FringeFit {
  double phase = 0.0;       ///< in control-phase coordinates, wrapped to [0, 2pi)
  double visibility = 0.0;
  double offset = 0.0;
  double scan_phase = 0.0;  ///< same fit expressed in the scanned relative phase
  double residual = 0.0;    ///< rms residual of the fit
};

[[nodiscard]] FringeFit fit_fringe(const std::vector<double>& phi, const std::vector<double>& parity);

[[nodiscard]] std::vector<double> uniform_grid(int points = 32);

using BankFactory = std::function<PulseBank(const SequencePlan&)>;

struct FringeSample {
  double scan_value = 0.0;
  double control_phase = 0.0;
  double parity = 0.0;
  double postselect_prob = 0.0;
};

struct FringeScan {
  std::vector<FringeSample> samples;
  FringeFit fit;
};

/// Scans the relative phase of `scanned` over `grid`, rebuilding the plan and
/// the pulse bank at every point.
[[nodiscard]] FringeScan fringe_scan(const SequencePlan& plan, Statistics stats,
                                     const BankFactory& bank_factory,
                                     const std::vector<double>& grid = uniform_grid(),
                                     PulseStage scanned = PulseStage::middle_pi,
                                     const NoiseRealization* noise = nullptr);

[[nodiscard]] double wrap_to_pi(double angle);
[[nodiscard]] double wrap_to_2pi(double angle);

}  // namespace exchlab::ramsey
