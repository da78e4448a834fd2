#include "exchlab/fock/mode.hpp"

#include <numbers>

namespace exchlab::fock {

double Statistics::exchange_phase() const noexcept {
  return is_fermion() ? std::numbers::pi : 0.0;
}

std::string to_string(Spin s) { return s == Spin::up ? "up" : "down"; }

std::string to_string(Statistics s) { return s.is_fermion() ? "fermion" : "boson"; }

std::string to_string(const Site& s) {
  if (s.y == 0) return std::to_string(s.x);
  return std::to_string(s.x) + ";" + std::to_string(s.y);
}

std::string to_string(const ModeLabel& m) {
  return to_string(m.site) + "," + to_string(m.spin) + "," + std::to_string(m.vib);
}

}  // namespace exchlab::fock
