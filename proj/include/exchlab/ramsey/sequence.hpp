#pragma once

#include <array>
#include <map>
#include <variant>
#include <vector>

#include "exchlab/fock/state.hpp"

namespace exchlab::ramsey {

using fock::Site;
using fock::SpinMatrix;

enum class Variant { one_dim, two_dim };
enum class PulseStage { first_half_pi, middle_pi, last_half_pi };

/// Whether the two inner components have already passed each other when the
/// middle pulse fires (1D only).
enum class InnerLayout { crossed, uncrossed };

[[nodiscard]] const char* to_string(Variant v);
[[nodiscard]] const char* to_string(PulseStage s);
[[nodiscard]] const char* to_string(InnerLayout l);

/// Relative pulse phases of the three stages. The site phases split each
/// relative phase symmetrically: phi_L = +dphi/2, phi_R = -dphi/2.
struct PhaseSettings {
  double dphi1 = 0.0;  ///< first pi/2 pulse
  double dphi2 = 0.0;  ///< last pi/2 pulse
  double dphi3 = 0.0;  ///< middle pi pulse

  [[nodiscard]] double control_phase() const noexcept { return dphi1 + dphi2 + dphi3; }
  [[nodiscard]] double relative(PulseStage stage) const noexcept;
  [[nodiscard]] double site_phase(PulseStage stage, bool left) const noexcept {
    return left ? relative(stage) / 2 : -relative(stage) / 2;
  }
  [[nodiscard]] PhaseSettings with(PulseStage stage, double value) const noexcept;
};

/// Displacement of the up and down components for one shift.
struct ShiftStep {
  Site up;
  Site down;
};

struct SitePulse {
  Site site;
  double phase = 0.0;
};

struct PulseStep {
  PulseStage stage = PulseStage::first_half_pi;
  double angle = 0.0;
  std::vector<SitePulse> targets;
};

struct ReadoutStep {
  Site left;
  Site right;
};

using Step = std::variant<ShiftStep, PulseStep, ReadoutStep>;

/// Transport sequence. In 1D the up component moves right and down moves left.
/// Crossed layout: the particles start at -n/2 and +n/2; after n/2+1 shifts
/// the outer components sit at -(n+1) and n+1 where the middle pi pulses flip
/// them, the inner ones at +1 and -1; n/2 further shifts recombine them at
/// L2 = -(n/2+1) and R2 = n/2+1.
/// Uncrossed layout: start at -(n/2+1) and n/2+1, n/2 shifts bring the inner
/// components to -1 and +1 and the outer ones to -(n+1) and n+1, then n/2+1
/// shifts recombine at -n/2 and n/2.
///
/// The 2D plan starts at (-n/2, n/2) and (n/2, -n/2), moves along an L of n
/// steps in x then n steps in y, pulses at (-3n/2, 3n/2) and (3n/2, -3n/2),
/// and finishes with n/2 diagonal steps to L2 = (-n, n), R2 = (n, -n).
struct SequencePlan {
  int n = 2;
  Variant variant = Variant::one_dim;
  InnerLayout layout = InnerLayout::crossed;
  PhaseSettings phases;
  std::vector<Step> steps;

  Site L1, R1;  ///< initial sites
  Site L2, R2;  ///< readout sites
  Site L3, R3;  ///< outer sites of the middle pi pulse
  Site inner_left, inner_right;  ///< where the inner components sit during the middle pulse

  int shifts_before_pi = 0;
  int shifts_after_pi = 0;
};

[[nodiscard]] SequencePlan build_sequence(int n, Variant variant, const PhaseSettings& phases,
                                          InnerLayout layout = InnerLayout::crossed);

/// Rotation R(theta, alpha) = cos(theta/2) I - i sin(theta/2)(cos(alpha) X + sin(alpha) Y)
/// in the (up, down) basis.
[[nodiscard]] SpinMatrix rotation(double theta, double alpha);

/// Pulse of area `theta` with site phase `phase`. At theta = pi/2 (outer
/// stages) this is (1/sqrt2)[[1, e^{-i phase}], [-e^{i phase}, 1]]; the middle
/// stage at theta = pi gives [[0, e^{i phase}], [-e^{-i phase}, 0]].
[[nodiscard]] SpinMatrix pulse_unitary(PulseStage stage, double theta, double phase);

/// Per-stage, per-site spin unitaries applied by run_sequence.
using PulseBank = std::map<PulseStage, std::map<Site, SpinMatrix>>;

[[nodiscard]] PulseBank ideal_pulse_bank(const SequencePlan& plan);

/// Positions of the four single-particle components after every step:
/// [L-up, L-down, R-up, R-down], labelled by their initial spin.
[[nodiscard]] std::vector<std::array<Site, 4>> component_paths(const SequencePlan& plan);

}  // namespace exchlab::ramsey
