#include "exchlab/rotor/trap.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "exchlab/errors.hpp"

namespace exchlab::rotor {

using std::numbers::pi;

double PhysicalConstants::coulomb_constant() const noexcept { return e * e / (4 * pi * epsilon0); }

TrapConfig TrapConfig::calcium_default() {
  TrapConfig cfg;
  cfg.Omega_rf = 2 * pi * 20e6;
  cfg.q = 0.2;
  cfg.a_z = a_z_for(2 * pi * 1.4e6, cfg.Omega_rf);
  return cfg;
}

double TrapConfig::a_z_for(double omega_z, double Omega_rf) {
  const double r = 2 * omega_z / Omega_rf;
  return r * r;
}

TrapFrequencies trap_frequencies(const TrapConfig& cfg) {
  const double base = cfg.q * cfg.q / 2 - cfg.a_z / 2;
  if (!(cfg.Omega_rf > 0.0) || !(cfg.a_z > 0.0) || !(base - std::abs(cfg.a) > 0.0)) {
    throw UnstableConfig("radial confinement requires q^2/2 - a_z/2 - |a| > 0 and a_z > 0");
  }
  const double half = cfg.Omega_rf / 2;
  return {half * std::sqrt(base + cfg.a), half * std::sqrt(base - cfg.a), half * std::sqrt(base),
          half * std::sqrt(cfg.a_z)};
}

double equilibrium_distance(double mass, double omega_perp, const PhysicalConstants& k) {
  return std::cbrt(k.e * k.e / (2 * pi * k.epsilon0 * mass * omega_perp * omega_perp));
}

double averaged_coulomb(double r, double theta, double q, const PhysicalConstants& k) {
  const double c = std::cos(2 * theta);
  return k.coulomb_constant() / r * (1 + q * q / 16 * (3 * c * c - 1));
}

RockingFrequency rocking_frequency(double omega_x, double omega_y, double q) {
  const double radicand = omega_y * omega_y - omega_x * omega_x * (1 + 1.5 * q * q);
  return {std::sqrt(std::abs(radicand)), radicand < 0};
}

double critical_splitting(double q, double omega_perp) { return 0.75 * q * q * omega_perp; }

RotorModel::RotorModel(const TrapConfig& trap) : trap_(trap) {
  TrapConfig centred = trap;
  centred.a = 0.0;
  const auto f = trap_frequencies(centred);
  r0_ = equilibrium_distance(trap.mass, f.omega_perp, trap.k) / 2;
  B_ = 0.375 * trap.q * trap.q * f.omega_perp * f.omega_perp;
  P_ = trap.mass * r0_ * r0_ / trap.k.hbar;
  E_rot_ = trap.k.hbar / (4 * trap.mass * r0_ * r0_);
  const double half = trap.Omega_rf / 2;
  dA_da_ = -2 * half * half;
}

RotorCoefficients RotorModel::coefficients(double a) const noexcept {
  return {A(a), B_, r0_, E_rot_, P_};
}

double RotorModel::potential_minimum(double a) const noexcept {
  const double A_ = A(a);
  const double s = std::clamp((1 - A_ / (4 * B_)) / 2, 0.0, 1.0);
  const double u = 1 - 2 * s;
  return P_ * (A_ * s + B_ * u * u);
}

double aharonov_bohm_phase(double B_tesla, double r0, double charge, double hbar) {
  return charge * B_tesla * pi * r0 * r0 / hbar;
}

SymmetryWeights bell_symmetry_weights(double phi) {
  const std::complex<double> e = std::polar(1.0, phi);
  return {std::norm((1.0 + e) / 2.0), std::norm((1.0 - e) / 2.0)};
}

double bell_excitation_probability(double phi) { return bell_symmetry_weights(phi).triplet; }

}  // namespace exchlab::rotor
