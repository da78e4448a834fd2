#include "exchlab/rotor/spectrum.hpp"

#include <lapacke.h>

#include <cmath>
#include <limits>

#include "exchlab/errors.hpp"
#include "exchlab/util/parallel.hpp"

namespace exchlab::rotor {

Spectrum spectrum(const BandedSymmetric& h, int k) {
  const int n = h.size();
  if (k < 1 || k > n) throw ConvergenceFailure("requested " + std::to_string(k) + " eigenpairs of a size " +
                                               std::to_string(n) + " matrix");
  const int kd = h.bandwidth();
  std::vector<double> ab = h.data();
  std::vector<double> q(static_cast<std::size_t>(n) * n);
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) * k);
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  lapack_int found = 0;
  const double abstol = 2 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, kd, ab.data(), kd + 1, q.data(), n,
                                         0.0, 0.0, 1, k, abstol, &found, w.data(), z.data(), n, ifail.data());
  if (info != 0 || found != k) {
    throw ConvergenceFailure("dsbevx failed (info " + std::to_string(info) + ", found " +
                             std::to_string(found) + ")");
  }
  Spectrum s;
  s.values = Eigen::Map<Eigen::VectorXd>(w.data(), k);
  s.vectors = Eigen::Map<Eigen::MatrixXd>(z.data(), n, k);
  return s;
}

Spectrum full_spectrum(const BandedSymmetric& h) {
  const int n = h.size();
  const int kd = h.bandwidth();
  std::vector<double> ab = h.data();
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) * n);
  const lapack_int info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'V', 'U', n, kd, ab.data(), kd + 1, w.data(),
                                         z.data(), n);
  if (info != 0) throw ConvergenceFailure("dsbevd failed (info " + std::to_string(info) + ")");
  return {Eigen::Map<Eigen::VectorXd>(w.data(), n), Eigen::Map<Eigen::MatrixXd>(z.data(), n, n)};
}

TruncationChoice converge_truncation(const RotorModel& model, Sector sector, const std::vector<double>& a_values,
                                     int k, double tolerance, int N_start, int N_max) {
  auto levels = [&](int N) {
    const auto h = linear_hamiltonian(model, AngularBasis(sector, N));
    std::vector<Eigen::VectorXd> out;
    for (double a : a_values) {
      out.push_back(spectrum(h.at(a), k).values.array() - model.potential_minimum(a));
    }
    return out;
  };
  int N = std::max(N_start, k);
  auto current = levels(N);
  while (2 * N <= N_max) {
    auto next = levels(2 * N);
    double change = 0.0;
    for (std::size_t i = 0; i < a_values.size(); ++i) {
      const Eigen::ArrayXd rel = (next[i] - current[i]).array().abs() / next[i].array().abs();
      change = std::max(change, rel.maxCoeff());
    }
    if (change < tolerance) return {N, change};
    N *= 2;
    current = std::move(next);
  }
  throw ConvergenceFailure("basis truncation did not converge below N = " + std::to_string(N_max));
}

namespace {

Spectrum checked_spectrum(const LinearHamiltonian& h, double a, int k) {
  auto s = spectrum(h.at(a), k);
  const double gap = s.values(1) - s.values(0);
  if (!(gap > 1e-12 * std::max(1.0, std::abs(s.values(0))))) {
    throw DegenerateGroundState("ground state is degenerate at a = " + std::to_string(a));
  }
  return s;
}

}  // namespace

double adiabaticity_perturbative(const LinearHamiltonian& h, double a, int k) {
  const auto s = checked_spectrum(h, a, k);
  const Eigen::VectorXd dh0 = h.H1.multiply(Eigen::VectorXd(s.vectors.col(0)));
  double gamma = 0.0;
  for (int n = 1; n < k; ++n) {
    const double gap = s.values(n) - s.values(0);
    gamma += std::abs(s.vectors.col(n).dot(dh0)) / (gap * gap);
  }
  return gamma;
}

double adiabaticity_finite_difference(const LinearHamiltonian& h, double a, int k) {
  const auto s = checked_spectrum(h, a, k);
  const Eigen::VectorXd dh0 = h.H1.multiply(Eigen::VectorXd(s.vectors.col(0)));
  const double gap = s.values(1) - s.values(0);
  const double step = 1e-3 * gap / dh0.norm();
  auto aligned = [&](double a_shift) {
    auto t = spectrum(h.at(a_shift), k);
    for (int n = 0; n < k; ++n)
      if (t.vectors.col(n).dot(s.vectors.col(n)) < 0) t.vectors.col(n) *= -1.0;
    return t;
  };
  const auto plus = aligned(a + step);
  const auto minus = aligned(a - step);
  double gamma = 0.0;
  for (int n = 1; n < k; ++n) {
    const double d = (plus.vectors.col(n) - minus.vectors.col(n)).dot(s.vectors.col(0)) / (2 * step);
    gamma += std::abs(d) / (s.values(n) - s.values(0));
  }
  return gamma;
}

std::vector<SpectrumRow> sweep_spectrum(const LinearHamiltonian& h, const std::vector<double>& a_values, int k,
                                        int threads) {
  std::vector<SpectrumRow> rows(a_values.size());
  util::parallel_for(a_values.size(), threads, [&](std::size_t i) {
    const auto s = spectrum(h.at(a_values[i]), k);
    rows[i] = {a_values[i], s.values.tail(k - 1).array() - s.values(0)};
  });
  return rows;
}

GapSummary minimum_gap(const std::vector<SpectrumRow>& rows) {
  GapSummary g{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& r : rows) {
    if (r.excitations.size() > 0 && r.excitations(0) < g.min_gap) g = {r.excitations(0), r.a};
  }
  return g;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? a : a + (b - a) * i / (count - 1);
  return v;
}

}  // namespace exchlab::rotor
