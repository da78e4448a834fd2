#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "exchlab/errors.hpp"
#include "exchlab/rotor/phases.hpp"
#include "exchlab/rotor/propagate.hpp"
#include "exchlab/rotor/spectrum.hpp"

using namespace exchlab;
using namespace exchlab::rotor;
using std::numbers::pi;

namespace {

const RotorModel& calcium() {
  static const RotorModel m(TrapConfig::calcium_default());
  return m;
}

const LinearHamiltonian& fermion_h(int N) {
  static std::map<int, LinearHamiltonian> cache;
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, linear_hamiltonian(calcium(), AngularBasis(Sector::fermion_odd, N))).first;
  return it->second;
}

constexpr double kTwoPi = 2 * pi;

}  // namespace

// ---- trap and statics -------------------------------------------------------

TEST(Trap, CalciumFrequencies) {
  auto cfg = TrapConfig::calcium_default();
  const auto f = trap_frequencies(cfg);
  EXPECT_NEAR(f.omega_perp / kTwoPi, 1e6, 0.02e6);
  EXPECT_DOUBLE_EQ(f.omega_x, f.omega_y);
  EXPECT_NEAR(f.omega_z / kTwoPi, 1.4e6, 1.0);
  cfg.a = 4e-4;
  const auto g = trap_frequencies(cfg);
  const double half = cfg.Omega_rf / 2;
  EXPECT_NEAR(g.omega_x * g.omega_x - g.omega_y * g.omega_y, half * half * 2 * cfg.a, 1e-6 * half * half * cfg.a);
  EXPECT_NEAR(f.omega_perp * f.omega_perp, 0.5 * (g.omega_x * g.omega_x + g.omega_y * g.omega_y),
              1e-12 * f.omega_perp * f.omega_perp);
}

TEST(Trap, UnstableConfigIsRejected) {
  auto cfg = TrapConfig::calcium_default();
  cfg.a = 0.05;
  EXPECT_THROW((void)trap_frequencies(cfg), UnstableConfig);
  cfg.a = 0;
  cfg.q = 0.05;
  EXPECT_THROW((void)trap_frequencies(cfg), UnstableConfig);
}

TEST(Trap, EquilibriumDistance) {
  const double m = constants::calcium40_mass;
  const double w = kTwoPi * 1e6;
  const double d = equilibrium_distance(m, w);
  EXPECT_NEAR(d, 5.6e-6, 0.02 * 5.6e-6);
  const PhysicalConstants k;
  const double r0 = d / 2;
  const double trap_force = m * w * w * r0;
  const double coulomb = k.coulomb_constant() / (d * d);
  EXPECT_LT(std::abs(trap_force - coulomb) / coulomb, 1e-9);
  EXPECT_NEAR(equilibrium_distance(m, 2 * w) / d, std::pow(2.0, -2.0 / 3.0), 1e-12);
}

// Average of the bare Coulomb energy along the driven trajectory
// x(t) = x(1 + q/2 cos t), y(t) = y(1 - q/2 cos t) over one period.
TEST(Trap, AveragedCoulombMatchesMicromotionQuadrature) {
  const PhysicalConstants k;
  const double r = 5e-6;
  for (double q : {0.1, 0.2}) {
    for (double theta : {0.0, 0.3, pi / 4, 1.1}) {
      const int M = 4096;
      double sum = 0.0;
      for (int i = 0; i < M; ++i) {
        const double c = 0.5 * q * std::cos(kTwoPi * i / M);
        const double x = r * std::cos(theta) * (1 + c);
        const double y = r * std::sin(theta) * (1 - c);
        sum += k.coulomb_constant() / std::hypot(x, y);
      }
      const double avg = sum / M;
      const double formula = averaged_coulomb(r, theta, q);
      EXPECT_LT(std::abs(avg - formula) / formula, q * q * q * q) << q << " " << theta;
    }
  }
  EXPECT_NEAR(averaged_coulomb(r, pi / 4, 0.2) / averaged_coulomb(r, pi / 4, 0.0), 1 - 0.04 / 16, 1e-15);
}

TEST(Trap, CriticalSplittingAndRocking) {
  const double wp = kTwoPi * 1e6;
  const double d = critical_splitting(0.2, wp);
  EXPECT_NEAR(d / kTwoPi, 30e3, 1e-9);
  const auto secular = rocking_frequency(wp - d / 2, wp + d / 2, 0.0);
  EXPECT_FALSE(secular.destabilized);
  EXPECT_NEAR(secular.value / kTwoPi, 240e3, 0.03 * 240e3);
  EXPECT_TRUE(rocking_frequency(wp, wp, 0.2).destabilized);
  EXPECT_NEAR(rocking_frequency(1.1, 1.3, 0.0).value, std::sqrt(1.3 * 1.3 - 1.1 * 1.1), 1e-15);
}

TEST(Trap, AngularCurvatureMatchesRockingFormula) {
  const auto& m = calcium();
  const auto perp = trap_frequencies(m.trap()).omega_perp;
  const double q = m.trap().q;
  for (double a : {-3.5e-4, -4e-4, -4.5e-4}) {
    auto cfg = m.trap();
    cfg.a = a;
    const auto f = trap_frequencies(cfg);
    const double rock = std::pow(rocking_frequency(f.omega_x, f.omega_y, q).value, 2);
    // E_rot p^2 + P (A sin^2 + B cos^2 2theta) near theta = 0: omega^2 = A - 4B
    const double angular = m.A(a) - 4 * m.B();
    EXPECT_LT(std::abs(angular - rock), 2 * std::pow(q, 4) * perp * perp);
  }
}

// ---- Hamiltonian ------------------------------------------------------------

TEST(Hamiltonian, MatrixElementsMatchQuadrature) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (auto sector : {Sector::fermion_odd, Sector::boson_even, Sector::fermion_odd_sine, Sector::boson_even_sine,
                      Sector::fermion_full, Sector::boson_full}) {
    const AngularBasis basis(sector, 8);
    for (int rep = 0; rep < 3; ++rep) {
      RotorCoefficients c;
      c.A = u(rng);
      c.B = std::abs(u(rng)) + 0.1;
      c.E_rot = std::abs(u(rng));
      c.P = 1.0;
      const Eigen::MatrixXd H = hamiltonian_matrix(c, basis).dense();
      const int M = 1024;
      const int n = basis.size();
      Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(n, n);
      for (int g = 0; g < M; ++g) {
        const double th = kTwoPi * g / M;
        const double V = c.A * std::pow(std::sin(th), 2) + c.B * std::pow(std::cos(2 * th), 2);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            Q(i, j) += std::conj(basis.evaluate(i, th)) * V * basis.evaluate(j, th) * (kTwoPi / M);
      }
      for (int i = 0; i < n; ++i) Q(i, i) += c.E_rot * std::pow(basis.orders()[i], 2);
      EXPECT_LT((Q - H.cast<std::complex<double>>()).cwiseAbs().maxCoeff(), 1e-10) << to_string(sector);
    }
  }
}

TEST(Hamiltonian, SymmetricAndBanded) {
  const auto& h = fermion_h(64);
  const Eigen::MatrixXd H = h.at(1e-4).dense();
  EXPECT_EQ((H - H.transpose()).cwiseAbs().maxCoeff(), 0.0);
  for (int i = 0; i < H.rows(); ++i)
    for (int j = 0; j < H.cols(); ++j)
      if (std::abs(i - j) > 2) EXPECT_EQ(H(i, j), 0.0);
}

TEST(Hamiltonian, FreeRotorIsDiagonal) {
  const AngularBasis basis(Sector::boson_even, 6);
  RotorCoefficients c;
  c.E_rot = 3.0;
  const Eigen::MatrixXd H = hamiltonian_matrix(c, basis).dense();
  for (int i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(H(i, i), 3.0 * 4 * i * i);
  EXPECT_EQ((H - Eigen::MatrixXd(H.diagonal().asDiagonal())).norm(), 0.0);
}

// ---- spectrum ---------------------------------------------------------------

TEST(Spectrum, MatchesDenseSolver) {
  const auto H = fermion_h(64).at(-2e-4);
  const auto s = spectrum(H, 10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.dense());
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(s.values(i), es.eigenvalues()(i), 1e-12 * std::abs(es.eigenvalues()(i)));
  EXPECT_LT((s.vectors.transpose() * s.vectors - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-9);
  for (int i = 1; i < 10; ++i) EXPECT_GE(s.values(i), s.values(i - 1));
  EXPECT_THROW((void)spectrum(H, 65), ConvergenceFailure);
}

TEST(Spectrum, TruncationConvergesAt512) {
  const auto t = converge_truncation(calcium(), Sector::fermion_odd, {-4e-4, 0.0, 4e-4}, 8, 1e-10, 128);
  EXPECT_LE(t.N, 512);
  EXPECT_LT(t.relative_change, 1e-10);
}

TEST(Spectrum, HarmonicRegimeLadder) {
  const auto& m = calcium();
  const auto s = spectrum(fermion_h(512).at(-4e-4), 4);
  const double omega = std::sqrt(m.A(-4e-4) - 4 * m.B());
  // cosine functions are even about the well, so only every second level appears
  EXPECT_NEAR((s.values(1) - s.values(0)) / (2 * omega), 1.0, 0.03);
  EXPECT_NEAR((s.values(2) - s.values(1)) / (s.values(1) - s.values(0)), 1.0, 0.03);
}

TEST(Spectrum, DoubleWellPairsAreNearlyDegenerate) {
  const auto& m = calcium();
  const auto hs = linear_hamiltonian(m, AngularBasis(Sector::fermion_odd_sine, 512));
  for (double a : {-1e-4, 0.0, 1e-4}) {
    const auto c = spectrum(fermion_h(512).at(a), 2);
    const auto s = spectrum(hs.at(a), 1);
    EXPECT_LT(std::abs(c.values(0) - s.values(0)), 1e-6 * (c.values(1) - c.values(0)));
  }
}

TEST(Spectrum, SameSymmetryGapStaysAboveTenKilohertz) {
  const auto rows = sweep_spectrum(fermion_h(512), linspace(-4e-4, 4e-4, 161), 3);
  EXPECT_GT(minimum_gap(rows).min_gap, kTwoPi * 10e3);
}

TEST(Adiabaticity, MethodsAgree) {
  for (double a : {-4e-4, -3.1e-4, -3.04e-4, -1e-4, 0.0, 2.5e-4, 3.05e-4}) {
    const double p = adiabaticity_perturbative(fermion_h(512), a);
    const double f = adiabaticity_finite_difference(fermion_h(512), a);
    EXPECT_NEAR(f / p, 1.0, 0.01) << a;
  }
}

TEST(Adiabaticity, PeaksAtWellSplitting) {
  const auto g = sample_gamma(fermion_h(256), -4e-4, 0.0, 201, 24, 1, 0.0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < g.a.size(); ++i)
    if (g.gamma[i] > g.gamma[best]) best = i;
  EXPECT_NEAR(g.a[best], -calcium().a_critical(), 0.03 * calcium().a_critical());
  EXPECT_LT(g.gamma.front(), 0.01 * g.gamma[best]);
}

TEST(Adiabaticity, DegenerateGroundStateIsReported) {
  const AngularBasis basis(Sector::fermion_full, 4);
  RotorCoefficients c;
  c.E_rot = 1.0;
  LinearHamiltonian h{basis, hamiltonian_matrix(c, basis), BandedSymmetric(basis.size(), 2), {}};
  EXPECT_THROW((void)adiabaticity_perturbative(h, 0.0, 4), DegenerateGroundState);
}

// ---- ramps ------------------------------------------------------------------

TEST(Ramp, ConstantGammaGivesLinearRamp) {
  GammaSamples g{linspace(-1.0, 1.0, 250), std::vector<double>(250, 3.0)};
  const auto r = build_ramp(-1.0, 1.0, 2.0, g);
  for (double t : {0.0, 0.3, 1.0, 1.7, 2.0}) EXPECT_NEAR(r.a_at(t), -1.0 + t, 1e-12);
  EXPECT_NEAR(r.rate_at(0.9), 1.0, 1e-9);
}

TEST(Ramp, DurationRescalesLinearly) {
  GammaSamples g{linspace(0.0, 1.0, 300), {}};
  for (double a : g.a) g.gamma.push_back(1.0 + 10 * std::exp(-50 * (a - 0.4) * (a - 0.4)));
  const auto r1 = build_ramp(0.0, 1.0, 2e-3, g);
  const auto r2 = build_ramp(0.0, 1.0, 1e-3, g);
  for (std::size_t i = 0; i < r1.times().size(); ++i) EXPECT_NEAR(r2.times()[i], 0.5 * r1.times()[i], 1e-18);
  for (std::size_t i = 1; i < r1.times().size(); ++i) EXPECT_GT(r1.values()[i], r1.values()[i - 1]);
  EXPECT_DOUBLE_EQ(r1.a_start(), 0.0);
  EXPECT_DOUBLE_EQ(r1.a_end(), 1.0);
}

TEST(Ramp, NeedsDenseGamma) {
  GammaSamples g{linspace(0.0, 1.0, 50), std::vector<double>(50, 1.0)};
  EXPECT_THROW((void)build_ramp(0.0, 1.0, 1.0, g), std::invalid_argument);
}

TEST(Ramp, ReverseAndConcatenate) {
  const auto r = linear_ramp(-1.0, 1.0, 2.0);
  const auto back = reversed(r);
  EXPECT_NEAR(back.a_at(0.5), r.a_at(1.5), 1e-12);
  const auto rt = concatenate(r, back);
  EXPECT_DOUBLE_EQ(rt.duration(), 4.0);
  EXPECT_NEAR(rt.a_at(3.0), r.a_at(1.0), 1e-12);
  const auto st = staircase(r, 4);
  EXPECT_DOUBLE_EQ(st.a_at(0.1), r.a_at(0.25));
  EXPECT_DOUBLE_EQ(st.a_at(1.9), r.a_at(1.75));
}

// ---- propagation ------------------------------------------------------------

TEST(Propagate, FrozenEigenstateStaysPut) {
  const auto& h = fermion_h(128);
  const auto psi = ground_state(h, -1e-4);
  for (auto method : {Method::full_banded, Method::eigenframe}) {
    PropagationOptions o;
    o.method = method;
    o.samples = 11;
    o.eigen_grid = 21;
    const auto tr = propagate(h, frozen_ramp(-1e-4, 2e-5), psi, o);
    EXPECT_GT(tr.min_ground_overlap2, 1 - 1e-10) << to_string(method);
    EXPECT_LT(tr.max_norm_drift, 1e-8);
  }
}

// Exact evolution over a 64-step staircase: each segment applies
// V exp(-i E dt) V^T from a dense eigendecomposition.
TEST(Propagate, PiecewiseFrozenOracle) {
  const auto& h = fermion_h(128);
  const auto ramp = linear_ramp(-3.3e-4, -2.8e-4, 2e-4);
  const auto stairs = staircase(ramp, 64);
  const Eigen::VectorXcd psi0 = ground_state(h, stairs.a_start());
  Eigen::VectorXcd exact = psi0;
  for (int k = 0; k < 64; ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.at(stairs.values()[k]).dense());
    const double dt = stairs.times()[k + 1] - stairs.times()[k];
    const Eigen::VectorXcd ph = (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0, -dt))
                                    .array()
                                    .exp()
                                    .matrix();
    const Eigen::MatrixXcd V = es.eigenvectors().cast<std::complex<double>>();
    exact = V * ph.asDiagonal() * (V.adjoint() * exact);
  }
  PropagationOptions o;
  o.samples = 3;
  const auto tr = propagate(h, stairs, psi0, o);
  EXPECT_GT(std::norm(exact.dot(tr.final_state)), 1 - 1e-3);
}

TEST(Propagate, BackendsAgreeOnShortRamp) {
  const auto& h = fermion_h(128);
  const auto ramp = linear_ramp(-3.3e-4, -2.8e-4, 2e-4);
  PropagationOptions o;
  o.samples = 21;
  o.eigen_grid = 401;
  const auto c = cross_validate(h, ramp, ground_state(h, ramp.a_start()), o);
  EXPECT_LT(c.population_difference, 1e-3);
  EXPECT_LT(c.full.final_ground_population, 0.999);  // the ramp is not trivially adiabatic
}

TEST(Propagate, RejectsUnnormalisedStart) {
  const auto& h = fermion_h(128);
  const Eigen::VectorXcd psi = 2.0 * ground_state(h, 0.0);
  EXPECT_THROW((void)propagate(h, frozen_ramp(0.0, 1e-6), psi), ConfigInvalid);
}

TEST(Propagate, FullBasisKeepsReflectionSymmetry) {
  const auto ramp = linear_ramp(-4e-4, 4e-4, 1e-4);
  PropagationOptions o;
  o.samples = 5;
  for (auto s : {fock::Statistics::fermion(), fock::Statistics::boson()}) {
    const auto r = parity_transfer(calcium(), s, ramp, 128, o, true);
    EXPECT_LE(r.forbidden_population, 1e-8);
    EXPECT_NEAR(std::abs(r.final_parity), 1.0, 1e-12);
  }
}

// ---- phases -----------------------------------------------------------------

TEST(Phases, AharonovBohm) {
  EXPECT_NEAR(aharonov_bohm_phase(4e-4, 2.5e-6) / kTwoPi, 1.9, 0.03 * 1.9);
  EXPECT_EQ(aharonov_bohm_phase(0.0, 2.5e-6), 0.0);
  EXPECT_NEAR(aharonov_bohm_phase(1e-4, 5e-6) / aharonov_bohm_phase(1e-4, 2.5e-6), 4.0, 1e-12);
}

TEST(Phases, BellStateSymmetry) {
  EXPECT_NEAR(bell_excitation_probability(0.0), 1.0, 1e-15);
  EXPECT_NEAR(bell_excitation_probability(pi), 0.0, 1e-15);
  EXPECT_NEAR(bell_excitation_probability(pi / 2), 0.5, 1e-15);
  const auto w = bell_symmetry_weights(pi / 3);
  EXPECT_NEAR(w.triplet + w.singlet, 1.0, 1e-15);
  EXPECT_NEAR(w.triplet, bell_excitation_probability(pi / 3), 1e-15);
}

TEST(Phases, TrackerFollowsClosedForm) {
  const auto& m = calcium();
  MinimumTracker tr(m);
  // quartic bottom at the splitting point, so theta is only good to ~eps^(1/4) there
  for (double a : linspace(-4e-4, 4e-4, 4001)) {
    const double tol = std::abs(std::abs(a) - m.a_critical()) < 0.05 * m.a_critical() ? 5e-4 : 1e-6;
    EXPECT_NEAR(tr.next(a), theta_min_closed_form(m, a), tol) << a;
  }
}

TEST(Phases, StrayPhaseBasics) {
  const auto r = linear_ramp(-4e-4, 4e-4, 2e-3);
  EXPECT_EQ(stray_phase(calcium(), 0.0, r, 2000).phase, 0.0);
  const double one = stray_phase(calcium(), 8e8, r, 20000).phase;
  const double two = stray_phase(calcium(), 8e8, concatenate(r, reversed(r)), 40000).phase;
  EXPECT_NEAR(two, 2 * one, 1e-6 * std::abs(one));
  EXPECT_GT(one, 0.0);
}

TEST(Phases, AbruptJumpFailsTracking) {
  const auto st = staircase(linear_ramp(-4e-4, 4e-4, 1e-3), 2);
  EXPECT_THROW((void)stray_phase(calcium(), 8e8, st, 100), MinimumTrackingFailure);
}
