#include "exchlab/rotor/propagate.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "exchlab/errors.hpp"
#include "exchlab/rotor/spectrum.hpp"
#include "exchlab/util/parallel.hpp"

namespace exchlab::rotor {

using cd = std::complex<double>;

const char* to_string(Method m) { return m == Method::eigenframe ? "eigenframe" : "full_banded"; }

Method method_from_string(const std::string& s) {
  if (s == "eigenframe") return Method::eigenframe;
  if (s == "full_banded") return Method::full_banded;
  throw ConfigInvalid("unknown propagation method '" + s + "'");
}

Eigen::VectorXcd ground_state(const LinearHamiltonian& h, double a) {
  return spectrum(h.at(a), 1).vectors.col(0).cast<cd>();
}

namespace {

constexpr double kNormLimit = 1e-8;

std::vector<double> sample_times(double T, int samples) {
  return linspace(0.0, T, std::max(samples, 2));
}

TrajectoryPoint observe(const LinearHamiltonian& h, double t, double a, const Eigen::VectorXcd& psi) {
  const auto s = spectrum(h.at(a), 2);
  TrajectoryPoint p;
  p.t = t;
  p.a = a;
  p.ground_overlap2 = std::norm(s.vectors.col(0).cast<cd>().dot(psi));
  p.excited_overlap2 = std::norm(s.vectors.col(1).cast<cd>().dot(psi));
  p.norm = psi.norm();
  return p;
}

void finish(Trajectory& tr) {
  for (const auto& p : tr.points) {
    tr.min_ground_overlap2 = std::min(tr.min_ground_overlap2, p.ground_overlap2);
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(p.norm - 1.0));
  }
  tr.final_ground_population = tr.points.back().ground_overlap2;
  if (tr.max_norm_drift > kNormLimit) {
    throw IntegratorFailure("norm drifted by " + std::to_string(tr.max_norm_drift));
  }
}

// Crank-Nicolson on the banded matrix, H evaluated at the step midpoint and
// shifted by the classical potential minimum. The LU factors are reused while
// a(t) is unchanged (staircase schedules).
class CrankNicolson {
 public:
  explicit CrankNicolson(const LinearHamiltonian& h) : h_(h) {
    n_ = h.H0.size();
    kd_ = h.H0.bandwidth();
    ldab_ = 3 * kd_ + 1;
    ab_.resize(static_cast<std::size_t>(ldab_) * n_);
    ipiv_.resize(static_cast<std::size_t>(n_));
  }

  void step(Eigen::VectorXcd& psi, double a, double dt, double shift) {
    if (a != cached_a_ || dt != cached_dt_) factor(a, dt, shift);
    const Eigen::VectorXcd hpsi = current_.multiply(psi) - shift * psi;
    rhs_ = psi - cd(0.0, 0.5 * dt) * hpsi;
    const lapack_int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n_, kd_, kd_, 1,
                                           reinterpret_cast<lapack_complex_double*>(ab_.data()), ldab_,
                                           ipiv_.data(), reinterpret_cast<lapack_complex_double*>(rhs_.data()), n_);
    if (info != 0) throw IntegratorFailure("zgbtrs failed (info " + std::to_string(info) + ")");
    psi = rhs_;
  }

 private:
  void factor(double a, double dt, double shift) {
    current_ = h_.at(a);
    std::fill(ab_.begin(), ab_.end(), cd(0.0));
    const int kl = kd_;
    const int ku = kd_;
    for (int j = 0; j < n_; ++j) {
      for (int i = std::max(0, j - ku); i <= std::min(n_ - 1, j + kl); ++i) {
        cd v = cd(0.0, 0.5 * dt) * current_.get(i, j);
        if (i == j) v += 1.0 - cd(0.0, 0.5 * dt) * shift;
        ab_[static_cast<std::size_t>(kl + ku + i - j + j * ldab_)] = v;
      }
    }
    const lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl, ku,
                                           reinterpret_cast<lapack_complex_double*>(ab_.data()), ldab_,
                                           ipiv_.data());
    if (info != 0) throw IntegratorFailure("zgbtrf failed (info " + std::to_string(info) + ")");
    cached_a_ = a;
    cached_dt_ = dt;
  }

  const LinearHamiltonian& h_;
  int n_ = 0;
  int kd_ = 0;
  int ldab_ = 0;
  std::vector<cd> ab_;
  std::vector<lapack_int> ipiv_;
  Eigen::VectorXcd rhs_;
  BandedSymmetric current_;
  double cached_a_ = std::numeric_limits<double>::quiet_NaN();
  double cached_dt_ = 0.0;
};

Trajectory propagate_full(const LinearHamiltonian& h, const RampSchedule& schedule, const Eigen::VectorXcd& initial,
                          const PropagationOptions& o) {
  if (!(o.dt > 0)) throw ConfigInvalid("time step must be positive");
  const double T = schedule.duration();
  // Step boundaries: every sample time and every staircase breakpoint.
  std::vector<double> marks = sample_times(T, o.samples);
  for (double b : schedule.breakpoints()) marks.push_back(b);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end(), [T](double x, double y) { return std::abs(x - y) <= 1e-15 * T; }),
              marks.end());
  const auto samples = sample_times(T, o.samples);

  CrankNicolson cn(h);
  Eigen::VectorXcd psi = initial;
  Trajectory tr;
  std::size_t next_sample = 0;
  auto record = [&](double t) {
    while (next_sample < samples.size() && std::abs(samples[next_sample] - t) <= 1e-12 * T) {
      tr.points.push_back(observe(h, t, schedule.a_at(t), psi));
      ++next_sample;
    }
  };
  record(0.0);
  for (std::size_t m = 1; m < marks.size(); ++m) {
    const double t0 = marks[m - 1];
    const double span = marks[m] - t0;
    const int steps = std::max(1, static_cast<int>(std::ceil(span / o.dt - 1e-9)));
    const double dt = span / steps;
    for (int s = 0; s < steps; ++s) {
      const double a = schedule.a_at(t0 + (s + 0.5) * dt);
      const double shift = h.reference_energy(a);
      cn.step(psi, a, dt, shift);
    }
    record(marks[m]);
  }
  tr.final_state = psi;
  finish(tr);
  return tr;
}

struct EigenFrame {
  Eigen::VectorXd E;
  Eigen::MatrixXd V;
  Eigen::MatrixXd A;  ///< <phi_n| d phi_m / da>
};

Trajectory propagate_eigenframe(const LinearHamiltonian& h, const RampSchedule& schedule,
                                const Eigen::VectorXcd& initial, const PropagationOptions& o) {
  if (schedule.staircase()) throw ConfigInvalid("eigenframe propagation needs a smooth schedule");
  if (o.k < 16) throw ConfigInvalid("eigenframe propagation needs at least 16 states");
  const int G = std::max(o.eigen_grid, 3);
  const double T = schedule.duration();
  const auto grid = linspace(0.0, T, G);
  std::vector<EigenFrame> frames(static_cast<std::size_t>(G));
  util::parallel_for(frames.size(), o.threads, [&](std::size_t j) {
    const auto s = spectrum(h.at(schedule.a_at(grid[j])), o.k);
    auto& f = frames[j];
    f.E = s.values;
    f.V = s.vectors;
    Eigen::MatrixXd H1V(f.V.rows(), o.k);
    for (int m = 0; m < o.k; ++m) H1V.col(m) = h.H1.multiply(Eigen::VectorXd(f.V.col(m)));
    const Eigen::MatrixXd M = f.V.transpose() * H1V;
    f.A = Eigen::MatrixXd::Zero(o.k, o.k);
    for (int n = 0; n < o.k; ++n)
      for (int m = 0; m < o.k; ++m)
        if (n != m) f.A(n, m) = M(n, m) / (f.E(m) - f.E(n));
  });
  // Continuous gauge: each eigenvector keeps the sign of its predecessor.
  for (std::size_t j = 1; j < frames.size(); ++j) {
    for (int n = 0; n < o.k; ++n) {
      if (frames[j].V.col(n).dot(frames[j - 1].V.col(n)) < 0) {
        frames[j].V.col(n) *= -1.0;
        frames[j].A.row(n) *= -1.0;
        frames[j].A.col(n) *= -1.0;
      }
    }
  }

  Eigen::VectorXcd b = frames[0].V.cast<cd>().transpose() * initial;
  const double captured = b.squaredNorm();
  if (std::abs(captured - initial.squaredNorm()) > 1e-10) {
    throw IntegratorFailure("initial state is not inside the retained eigenframe");
  }
  const auto samples = sample_times(T, o.samples);
  Trajectory tr;
  std::size_t next_sample = 0;
  auto in_basis = [&](std::size_t j, const Eigen::VectorXcd& coeff) {
    return Eigen::VectorXcd(frames[j].V.cast<cd>() * coeff);
  };
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  for (int j = 0; j + 1 < G; ++j) {
    const double t0 = grid[j];
    const double span = grid[j + 1] - t0;
    while (next_sample < samples.size() && samples[next_sample] <= t0 + 1e-12 * T) {
      tr.points.push_back(observe(h, t0, schedule.a_at(t0), in_basis(j, b)));
      ++next_sample;
    }
    const auto& f0 = frames[j];
    const auto& f1 = frames[j + 1];
    const double hstep = span / o.substeps;
    for (int s = 0; s < o.substeps; ++s) {
      const double w = (s + 0.5) / o.substeps;
      const double rate = schedule.rate_at(t0 + (s + 0.5) * hstep);
      const Eigen::VectorXd E = (1 - w) * f0.E + w * f1.E;
      const Eigen::MatrixXd A = (1 - w) * f0.A + w * f1.A;
      Eigen::MatrixXcd K = cd(0.0, -rate) * A.cast<cd>();
      for (int n = 0; n < o.k; ++n) K(n, n) = E(n) - E(0);
      es.compute(K);
      const Eigen::VectorXcd ph =
          (es.eigenvalues().cast<cd>() * cd(0.0, -hstep)).array().exp().matrix();
      b = es.eigenvectors() * ph.asDiagonal() * (es.eigenvectors().adjoint() * b);
    }
  }
  while (next_sample < samples.size()) {
    tr.points.push_back(observe(h, T, schedule.a_at(T), in_basis(static_cast<std::size_t>(G - 1), b)));
    ++next_sample;
  }
  tr.final_state = in_basis(static_cast<std::size_t>(G - 1), b);
  finish(tr);
  return tr;
}

}  // namespace

Trajectory propagate(const LinearHamiltonian& h, const RampSchedule& schedule, const Eigen::VectorXcd& initial,
                     const PropagationOptions& options) {
  if (initial.size() != h.H0.size()) throw ConfigInvalid("initial state does not match the basis");
  if (std::abs(initial.norm() - 1.0) > 1e-9) throw ConfigInvalid("initial state must be normalised");
  return options.method == Method::full_banded ? propagate_full(h, schedule, initial, options)
                                               : propagate_eigenframe(h, schedule, initial, options);
}

MethodComparison cross_validate(const LinearHamiltonian& h, const RampSchedule& schedule,
                                const Eigen::VectorXcd& initial, const PropagationOptions& options, double limit) {
  auto o = options;
  MethodComparison c;
  o.method = Method::full_banded;
  c.full = propagate(h, schedule, initial, o);
  o.method = Method::eigenframe;
  c.eigenframe = propagate(h, schedule, initial, o);
  c.population_difference = std::abs(c.full.final_ground_population - c.eigenframe.final_ground_population);
  if (c.population_difference > limit) {
    throw MethodDisagreement("backends disagree on the final ground population by " +
                             std::to_string(c.population_difference));
  }
  return c;
}

Eigen::VectorXcd to_full_basis(const AngularBasis& basis, const Eigen::VectorXcd& v, const AngularBasis& full) {
  if (basis.exponential() || !full.exponential()) throw ConfigInvalid("expected a cosine or sine basis and a full basis");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(full.size());
  const double r = 1.0 / std::numbers::sqrt2;
  for (int i = 0; i < basis.size(); ++i) {
    const int n = basis.orders()[static_cast<std::size_t>(i)];
    const int ip = full.index_of(n);
    const int im = full.index_of(-n);
    if (ip < 0 || im < 0) throw ConfigInvalid("full basis is too small for order " + std::to_string(n));
    if (n == 0) {
      out(ip) += v(i);
    } else if (basis.sine()) {
      out(ip) += v(i) * r / cd(0.0, 1.0);
      out(im) -= v(i) * r / cd(0.0, 1.0);
    } else {
      out(ip) += v(i) * r;
      out(im) += v(i) * r;
    }
  }
  return out;
}

double sine_population(const AngularBasis& full, const Eigen::VectorXcd& v) {
  double p = 0.0;
  for (int i = 0; i < full.size(); ++i) {
    const int n = full.orders()[static_cast<std::size_t>(i)];
    if (n <= 0) continue;
    p += std::norm(v(i) - v(full.index_of(-n))) / 2;
  }
  return p;
}

double reflection_parity(const AngularBasis& basis, const Eigen::VectorXcd& v) {
  double p = 0.0;
  for (int i = 0; i < basis.size(); ++i) p += basis.reflection_parity(i) * std::norm(v(i));
  return p / v.squaredNorm();
}

ParityTransfer parity_transfer(const RotorModel& model, fock::Statistics stats, const RampSchedule& schedule, int N,
                               const PropagationOptions& options, bool superselection_check) {
  const AngularBasis cosine(dynamics_sector(stats), N);
  const auto h = linear_hamiltonian(model, cosine);
  const auto initial = ground_state(h, schedule.a_start());

  ParityTransfer r;
  r.stats = stats;
  r.trajectory = propagate(h, schedule, initial, options);
  r.min_ground_overlap2 = r.trajectory.min_ground_overlap2;
  r.final_parity = reflection_parity(cosine, r.trajectory.final_state);

  const auto final_cos = ground_state(h, schedule.a_end());
  const double p_same = std::norm(final_cos.dot(r.trajectory.final_state));
  const bool cos_is_even = reflection_parity(cosine, final_cos) > 0;
  double p_other = 0.0;

  if (superselection_check) {
    const AngularBasis full(full_sector(stats), N + 1);
    const auto hf = linear_hamiltonian(model, full);
    auto o = options;
    o.method = Method::full_banded;
    const auto tf = propagate(hf, schedule, to_full_basis(cosine, initial, full), o);
    r.forbidden_population = sine_population(full, tf.final_state);
    const AngularBasis sine(partner_sector(stats), N);
    const auto final_sine = ground_state(linear_hamiltonian(model, sine), schedule.a_end());
    p_other = std::norm(to_full_basis(sine, final_sine, full).dot(tf.final_state));
  }
  r.p_n0_like = cos_is_even ? p_same : p_other;
  r.p_n1_like = cos_is_even ? p_other : p_same;
  return r;
}

}  // namespace exchlab::rotor
