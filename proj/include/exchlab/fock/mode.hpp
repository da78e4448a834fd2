#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <string>

namespace exchlab::fock {

using Amplitude = std::complex<double>;

enum class Spin : std::uint8_t { up = 0, down = 1 };

[[nodiscard]] constexpr int spin_sign(Spin s) noexcept {
  return s == Spin::up ? +1 : -1;
}

[[nodiscard]] constexpr Spin flipped(Spin s) noexcept {
  return s == Spin::up ? Spin::down : Spin::up;
}

/// Lattice coordinate in site units. One-dimensional lattices use y == 0.
struct Site {
  int x = 0;
  int y = 0;

  constexpr auto operator<=>(const Site&) const = default;
  constexpr Site operator+(const Site& o) const { return {x + o.x, y + o.y}; }
  constexpr Site operator-(const Site& o) const { return {x - o.x, y - o.y}; }
  constexpr Site operator-() const { return {-x, -y}; }
};

/// Single-particle mode: lattice site, pseudo-spin and vibrational level.
/// Ordering is lexicographic on (site, spin, vib).
struct ModeLabel {
  Site site;
  Spin spin = Spin::up;
  int vib = 0;

  constexpr auto operator<=>(const ModeLabel&) const = default;
};

enum class StatisticsKind : std::uint8_t { boson, fermion };

class Statistics {
 public:
  constexpr Statistics() = default;
  constexpr explicit Statistics(StatisticsKind kind) : kind_(kind) {}

  static constexpr Statistics boson() { return Statistics(StatisticsKind::boson); }
  static constexpr Statistics fermion() { return Statistics(StatisticsKind::fermion); }

  [[nodiscard]] constexpr StatisticsKind kind() const noexcept { return kind_; }
  [[nodiscard]] constexpr bool is_fermion() const noexcept {
    return kind_ == StatisticsKind::fermion;
  }

  /// 0 for bosons, pi for fermions.
  [[nodiscard]] double exchange_phase() const noexcept;

  /// e^{i exchange_phase}, exactly +1 or -1.
  [[nodiscard]] constexpr double sign() const noexcept { return is_fermion() ? -1.0 : 1.0; }

  constexpr bool operator==(const Statistics&) const = default;

 private:
  StatisticsKind kind_ = StatisticsKind::boson;
};

[[nodiscard]] std::string to_string(Spin s);
[[nodiscard]] std::string to_string(Statistics s);
[[nodiscard]] std::string to_string(const Site& s);
[[nodiscard]] std::string to_string(const ModeLabel& m);

}  // namespace exchlab::fock
