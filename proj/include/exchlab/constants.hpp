#pragma once

namespace exchlab::constants {

inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double epsilon0 = 8.8541878128e-12;         // F/m
inline constexpr double hbar = 1.054571817e-34;              // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double calcium40_mass = 39.96259 * atomic_mass_unit;

}  // namespace exchlab::constants
