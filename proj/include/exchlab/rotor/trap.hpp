#pragma once

#include "exchlab/constants.hpp"

namespace exchlab::rotor {

struct PhysicalConstants {
  double e = constants::elementary_charge;
  double epsilon0 = constants::epsilon0;
  double hbar = constants::hbar;

  /// e^2 / (4 pi epsilon0), J m
  [[nodiscard]] double coulomb_constant() const noexcept;
};

/// Linear Paul trap in the radial plane. omega_x and omega_y split by the dc
/// asymmetry `a`, which is the ramp parameter.
struct TrapConfig {
  double Omega_rf = 0.0;  ///< rad/s
  double q = 0.0;
  double a_z = 0.0;
  double mass = constants::calcium40_mass;
  double a = 0.0;
  PhysicalConstants k;

  /// 40Ca+ at Omega_rf = 2pi 20 MHz, q = 0.2, omega_z = 2pi 1.4 MHz.
  [[nodiscard]] static TrapConfig calcium_default();

  /// a_z = (2 omega_z / Omega_rf)^2
  [[nodiscard]] static double a_z_for(double omega_z, double Omega_rf);
};

struct TrapFrequencies {
  double omega_x = 0.0;
  double omega_y = 0.0;
  double omega_perp = 0.0;
  double omega_z = 0.0;
};

/// omega_{x,y} = (Omega/2) sqrt(q^2/2 - a_z/2 +- a), omega_perp at a = 0,
/// omega_z = (Omega/2) sqrt(a_z). Throws UnstableConfig.
[[nodiscard]] TrapFrequencies trap_frequencies(const TrapConfig& cfg);

/// Ion distance 2 r0 = (e^2 / (2 pi eps0 m omega_perp^2))^{1/3}.
[[nodiscard]] double equilibrium_distance(double mass, double omega_perp,
                                          const PhysicalConstants& k = {});

/// Time-averaged Coulomb energy (e^2 / 4 pi eps0 r)(1 + (q^2/16)(3 cos^2 2theta - 1)), J.
[[nodiscard]] double averaged_coulomb(double r, double theta, double q, const PhysicalConstants& k = {});

struct RockingFrequency {
  double value = 0.0;  ///< rad/s; sqrt(|radicand|) when destabilized
  bool destabilized = false;
};

/// sqrt(omega_y^2 - omega_x^2 (1 + 3 q^2 / 2))
[[nodiscard]] RockingFrequency rocking_frequency(double omega_x, double omega_y, double q);

/// (3/4) q^2 omega_perp
[[nodiscard]] double critical_splitting(double q, double omega_perp);

/// Coefficients of H/hbar = E_rot (-d^2/dtheta^2) + P (A sin^2 theta + B cos^2 2theta)
/// with P = m r0^2 / hbar.
struct RotorCoefficients {
  double A = 0.0;      ///< s^-2, omega_y^2 - omega_x^2
  double B = 0.0;      ///< s^-2, (3/8) q^2 omega_perp^2
  double r0 = 0.0;     ///< m
  double E_rot = 0.0;  ///< rad/s, hbar / (4 m r0^2)
  double P = 0.0;      ///< s, m r0^2 / hbar
};

/// Maps the ramp parameter a to rotor coefficients at fixed r0 and B.
class RotorModel {
 public:
  explicit RotorModel(const TrapConfig& trap);

  [[nodiscard]] const TrapConfig& trap() const noexcept { return trap_; }
  [[nodiscard]] double r0() const noexcept { return r0_; }
  [[nodiscard]] double B() const noexcept { return B_; }
  [[nodiscard]] double P() const noexcept { return P_; }
  [[nodiscard]] double E_rot() const noexcept { return E_rot_; }

  /// A(a) = omega_y^2 - omega_x^2 = -2 a (Omega/2)^2
  [[nodiscard]] double A(double a) const noexcept { return dA_da_ * a; }
  [[nodiscard]] double dA_da() const noexcept { return dA_da_; }
  [[nodiscard]] RotorCoefficients coefficients(double a) const noexcept;

  /// |a| at which the wells split, A = 4B.
  [[nodiscard]] double a_critical() const noexcept { return 4 * B_ / -dA_da_; }

  /// Minimum of A s + B (1 - 2 s)^2 over s = sin^2 theta in [0, 1], times P.
  [[nodiscard]] double potential_minimum(double a) const noexcept;

 private:
  TrapConfig trap_;
  double r0_ = 0.0;
  double B_ = 0.0;
  double P_ = 0.0;
  double E_rot_ = 0.0;
  double dA_da_ = 0.0;
};

/// q_charge B pi r0^2 / hbar
[[nodiscard]] double aharonov_bohm_phase(double B_tesla, double r0, double charge = constants::elementary_charge,
                                         double hbar = constants::hbar);

/// Rocking-excitation probability cos^2(phi/2) after ideal transfer of
/// (|ud> + e^{i phi}|du>)/sqrt2 for fermionic ions.
[[nodiscard]] double bell_excitation_probability(double phi);

struct SymmetryWeights {
  double triplet = 0.0;  ///< symmetric spin part, antisymmetric motion
  double singlet = 0.0;
};

/// |(1 +- e^{i phi})/2|^2
[[nodiscard]] SymmetryWeights bell_symmetry_weights(double phi);

}  // namespace exchlab::rotor
