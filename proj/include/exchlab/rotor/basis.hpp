#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "exchlab/fock/mode.hpp"
#include "exchlab/rotor/trap.hpp"

namespace exchlab::rotor {

/// Angular function families. The cosine sectors are the ones used for
/// dynamics; the sine sectors hold the reflection partners, and the
/// exponential sectors span both for superselection checks.
enum class Sector {
  fermion_odd,       ///< cos(n theta), n = 1, 3, 5, ...
  boson_even,        ///< cos(n theta), n = 0, 2, 4, ...
  fermion_odd_sine,  ///< sin(n theta), n = 1, 3, 5, ...
  boson_even_sine,   ///< sin(n theta), n = 2, 4, 6, ...
  fermion_full,      ///< e^{i n theta}, n odd in [-(2N-1), 2N-1]
  boson_full,        ///< e^{i n theta}, n even in [-2(N-1), 2(N-1)]
};

[[nodiscard]] const char* to_string(Sector s);
[[nodiscard]] Sector sector_from_string(const std::string& s);

/// Cosine sector holding the ground state for the given statistics.
[[nodiscard]] Sector dynamics_sector(fock::Statistics stats);
/// Sine sector of the same statistics.
[[nodiscard]] Sector partner_sector(fock::Statistics stats);
[[nodiscard]] Sector full_sector(fock::Statistics stats);

class AngularBasis {
 public:
  AngularBasis(Sector sector, int N);

  [[nodiscard]] Sector sector() const noexcept { return sector_; }
  [[nodiscard]] int N() const noexcept { return N_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(orders_.size()); }
  [[nodiscard]] const std::vector<int>& orders() const noexcept { return orders_; }
  [[nodiscard]] bool exponential() const noexcept;
  [[nodiscard]] bool sine() const noexcept;

  /// Index of the basis function of order n, or -1.
  [[nodiscard]] int index_of(int n) const noexcept;

  /// Real part and imaginary part of basis function i at theta (orthonormal on [0, 2pi)).
  [[nodiscard]] std::complex<double> evaluate(int i, double theta) const;

  /// Band half-width of operators coupling |dn| <= 4.
  [[nodiscard]] int bandwidth() const noexcept { return 2; }

  /// Parity of basis function i under theta -> pi - theta (cosine/sine sectors only).
  [[nodiscard]] int reflection_parity(int i) const;

 private:
  Sector sector_;
  int N_;
  std::vector<int> orders_;
};

/// Real symmetric band matrix in LAPACK upper storage: element (i, j) with
/// i <= j <= i + kd lives at ab[kd + i - j + j * (kd + 1)].
class BandedSymmetric {
 public:
  BandedSymmetric() = default;
  BandedSymmetric(int n, int kd) : n_(n), kd_(kd), ab_(static_cast<std::size_t>((kd + 1) * n), 0.0) {}

  [[nodiscard]] int size() const noexcept { return n_; }
  [[nodiscard]] int bandwidth() const noexcept { return kd_; }
  [[nodiscard]] double get(int i, int j) const;
  void add(int i, int j, double v);  ///< adds to (i, j) and, implicitly, (j, i)
  [[nodiscard]] const std::vector<double>& data() const noexcept { return ab_; }
  [[nodiscard]] std::vector<double>& data() noexcept { return ab_; }

  [[nodiscard]] Eigen::MatrixXd dense() const;
  [[nodiscard]] Eigen::VectorXcd multiply(const Eigen::VectorXcd& x) const;
  [[nodiscard]] Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;

  /// this + s * other (same shape)
  [[nodiscard]] BandedSymmetric axpy(double s, const BandedSymmetric& other) const;

 private:
  int n_ = 0;
  int kd_ = 0;
  std::vector<double> ab_;
};

/// Matrix of cos(k theta) in `basis`, k in {0, 2, 4}.
[[nodiscard]] BandedSymmetric cosine_operator(const AngularBasis& basis, int k);

/// H/hbar = E_rot n^2 + P (A sin^2 theta + B cos^2 2theta), rad/s.
[[nodiscard]] BandedSymmetric hamiltonian_matrix(const RotorCoefficients& c, const AngularBasis& basis);

/// H(a) = H0 + a H1 for a model with a-linear A.
struct LinearHamiltonian {
  AngularBasis basis;
  BandedSymmetric H0;
  BandedSymmetric H1;
  std::function<double(double)> reference;  ///< classical potential minimum vs a, rad/s

  [[nodiscard]] BandedSymmetric at(double a) const { return H0.axpy(a, H1); }
  [[nodiscard]] double reference_energy(double a) const { return reference ? reference(a) : 0.0; }
};

[[nodiscard]] LinearHamiltonian linear_hamiltonian(const RotorModel& model, const AngularBasis& basis);

}  // namespace exchlab::rotor
