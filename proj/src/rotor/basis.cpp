#include "exchlab/rotor/basis.hpp"

#include <cmath>
#include <numbers>

#include "exchlab/errors.hpp"

namespace exchlab::rotor {

using std::numbers::pi;

const char* to_string(Sector s) {
  switch (s) {
    case Sector::fermion_odd: return "fermion_odd";
    case Sector::boson_even: return "boson_even";
    case Sector::fermion_odd_sine: return "fermion_odd_sine";
    case Sector::boson_even_sine: return "boson_even_sine";
    case Sector::fermion_full: return "fermion_full";
    case Sector::boson_full: return "boson_full";
  }
  return "?";
}

Sector sector_from_string(const std::string& s) {
  for (auto sec : {Sector::fermion_odd, Sector::boson_even, Sector::fermion_odd_sine,
                   Sector::boson_even_sine, Sector::fermion_full, Sector::boson_full}) {
    if (s == to_string(sec)) return sec;
  }
  throw ConfigInvalid("unknown sector '" + s + "'");
}

Sector dynamics_sector(fock::Statistics stats) {
  return stats.is_fermion() ? Sector::fermion_odd : Sector::boson_even;
}

Sector partner_sector(fock::Statistics stats) {
  return stats.is_fermion() ? Sector::fermion_odd_sine : Sector::boson_even_sine;
}

Sector full_sector(fock::Statistics stats) {
  return stats.is_fermion() ? Sector::fermion_full : Sector::boson_full;
}

AngularBasis::AngularBasis(Sector sector, int N) : sector_(sector), N_(N) {
  if (N < 1) throw ConfigInvalid("basis truncation must be positive");
  switch (sector) {
    case Sector::fermion_odd:
    case Sector::fermion_odd_sine:
      for (int i = 0; i < N; ++i) orders_.push_back(2 * i + 1);
      break;
    case Sector::boson_even:
      for (int i = 0; i < N; ++i) orders_.push_back(2 * i);
      break;
    case Sector::boson_even_sine:
      for (int i = 0; i < N; ++i) orders_.push_back(2 * i + 2);
      break;
    case Sector::fermion_full:
      for (int n = -(2 * N - 1); n <= 2 * N - 1; n += 2) orders_.push_back(n);
      break;
    case Sector::boson_full:
      for (int n = -2 * (N - 1); n <= 2 * (N - 1); n += 2) orders_.push_back(n);
      break;
  }
}

bool AngularBasis::exponential() const noexcept {
  return sector_ == Sector::fermion_full || sector_ == Sector::boson_full;
}

bool AngularBasis::sine() const noexcept {
  return sector_ == Sector::fermion_odd_sine || sector_ == Sector::boson_even_sine;
}

int AngularBasis::index_of(int n) const noexcept {
  // Orders are an arithmetic sequence with step 2.
  const int first = orders_.front();
  if ((n - first) % 2 != 0 || n < first || n > orders_.back()) return -1;
  return (n - first) / 2;
}

std::complex<double> AngularBasis::evaluate(int i, double theta) const {
  const int n = orders_.at(static_cast<std::size_t>(i));
  if (exponential()) return std::polar(1.0 / std::sqrt(2 * pi), n * theta);
  if (sine()) return std::sin(n * theta) / std::sqrt(pi);
  return std::cos(n * theta) / std::sqrt(n == 0 ? 2 * pi : pi);
}

int AngularBasis::reflection_parity(int i) const {
  if (exponential()) throw ConfigInvalid("exponential functions have no definite reflection parity");
  const int n = orders_.at(static_cast<std::size_t>(i));
  const int sign = n % 2 == 0 ? 1 : -1;
  return sine() ? -sign : sign;
}

double BandedSymmetric::get(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (j - i > kd_) return 0.0;
  return ab_[static_cast<std::size_t>(kd_ + i - j + j * (kd_ + 1))];
}

void BandedSymmetric::add(int i, int j, double v) {
  if (i > j) std::swap(i, j);
  if (j - i > kd_) throw ConfigInvalid("element outside band");
  ab_[static_cast<std::size_t>(kd_ + i - j + j * (kd_ + 1))] += v;
}

Eigen::MatrixXd BandedSymmetric::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (int j = 0; j < n_; ++j)
    for (int i = std::max(0, j - kd_); i <= j; ++i) m(i, j) = m(j, i) = get(i, j);
  return m;
}

namespace {

template <class Vec>
Vec band_multiply(const BandedSymmetric& m, const Vec& x) {
  const int n = m.size();
  const int kd = m.bandwidth();
  Vec y = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    y(j) += m.get(j, j) * x(j);
    for (int i = std::max(0, j - kd); i < j; ++i) {
      const double v = m.get(i, j);
      y(i) += v * x(j);
      y(j) += v * x(i);
    }
  }
  return y;
}

}  // namespace

Eigen::VectorXcd BandedSymmetric::multiply(const Eigen::VectorXcd& x) const { return band_multiply(*this, x); }
Eigen::VectorXd BandedSymmetric::multiply(const Eigen::VectorXd& x) const { return band_multiply(*this, x); }

BandedSymmetric BandedSymmetric::axpy(double s, const BandedSymmetric& other) const {
  BandedSymmetric out = *this;
  for (std::size_t i = 0; i < ab_.size(); ++i) out.ab_[i] += s * other.ab_[i];
  return out;
}

BandedSymmetric cosine_operator(const AngularBasis& basis, int k) {
  const int size = basis.size();
  BandedSymmetric m(size, basis.bandwidth());
  const auto& orders = basis.orders();
  // cos(k theta) f_n expanded in basis functions, weights relative to the
  // unnormalised cos/sin/exp functions; norms fixed afterwards.
  auto norm_sq = [&](int n) {
    if (basis.exponential()) return 2 * pi;
    if (basis.sine()) return pi;
    return n == 0 ? 2 * pi : pi;
  };
  for (int j = 0; j < size; ++j) {
    const int n = orders[static_cast<std::size_t>(j)];
    if (k == 0) {
      m.add(j, j, 1.0);
      continue;
    }
    std::vector<std::pair<int, double>> terms;
    if (basis.exponential()) {
      terms = {{n + k, 0.5}, {n - k, 0.5}};
    } else if (basis.sine()) {
      // sin(n t) cos(k t) = [sin((n+k) t) + sin((n-k) t)] / 2
      terms.push_back({n + k, 0.5});
      if (n != k) terms.push_back({std::abs(n - k), n > k ? 0.5 : -0.5});
    } else {
      terms = {{n + k, 0.5}, {std::abs(n - k), 0.5}};
    }
    for (const auto& [p, w] : terms) {
      const int i = basis.index_of(p);
      if (i < 0 || i > j) continue;  // upper triangle only; symmetry fills the rest
      m.add(i, j, w * std::sqrt(norm_sq(p) / norm_sq(n)));
    }
  }
  return m;
}

namespace {

BandedSymmetric kinetic(const AngularBasis& basis, double E_rot) {
  BandedSymmetric k(basis.size(), basis.bandwidth());
  for (int i = 0; i < basis.size(); ++i) {
    const double n = basis.orders()[static_cast<std::size_t>(i)];
    k.add(i, i, E_rot * n * n);
  }
  return k;
}

// sin^2 theta = (1 - cos 2theta) / 2
BandedSymmetric sin_squared(const AngularBasis& basis) {
  const auto id = cosine_operator(basis, 0);
  return id.axpy(-0.5, id).axpy(-0.5, cosine_operator(basis, 2));
}

// cos^2 2theta = (1 + cos 4theta) / 2
BandedSymmetric cos_squared_2(const AngularBasis& basis) {
  const auto id = cosine_operator(basis, 0);
  return id.axpy(-0.5, id).axpy(0.5, cosine_operator(basis, 4));
}

}  // namespace

BandedSymmetric hamiltonian_matrix(const RotorCoefficients& c, const AngularBasis& basis) {
  return kinetic(basis, c.E_rot).axpy(c.P * c.A, sin_squared(basis)).axpy(c.P * c.B, cos_squared_2(basis));
}

LinearHamiltonian linear_hamiltonian(const RotorModel& model, const AngularBasis& basis) {
  auto H0 = kinetic(basis, model.E_rot()).axpy(model.P() * model.B(), cos_squared_2(basis));
  BandedSymmetric H1(basis.size(), basis.bandwidth());
  H1 = H1.axpy(model.P() * model.dA_da(), sin_squared(basis));
  return {basis, std::move(H0), std::move(H1), [model](double a) { return model.potential_minimum(a); }};
}

}  // namespace exchlab::rotor
