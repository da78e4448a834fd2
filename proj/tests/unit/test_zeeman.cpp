#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "exchlab/errors.hpp"
#include "exchlab/zeeman/pulse.hpp"

using namespace exchlab;
using namespace exchlab::zeeman;
using std::numbers::pi;

TEST(Zeeman, ClosedForms) {
  EXPECT_NEAR(ac_shift_closed_form(10, 2.0), -11 * pi / 240, 1e-15);
  EXPECT_NEAR(ac_shift_closed_form(10, 1.0), -11 * pi / 120, 1e-15);
  EXPECT_NEAR(zeeman_static_phase(10, 2.0, 11.0), -20 * pi / 11, 1e-14);
  EXPECT_EQ(zeeman_static_phase(10, 0.0, 1.0), 0.0);
}

TEST(Zeeman, PropagatorsAreUnitary) {
  const auto bank = simulate_gradient_pulse(GradientPulseConfig::from_rho(10, 2.3));
  EXPECT_LE(bank.max_unitarity_defect, 1e-9);
  EXPECT_LE(bank.max_richardson_error, 1e-10);
  for (const auto& [site, u] : bank.unitaries) EXPECT_LT((u * u.adjoint() - SpinMatrix::Identity()).norm(), 1e-9);
}

TEST(Zeeman, ResonantPulseFlipsOuterSites) {
  // far-detuned limit: each tone only drives its own site
  const auto bank = simulate_gradient_pulse(GradientPulseConfig::from_rho(10, 200.0));
  EXPECT_NEAR(std::abs(bank.unitaries.at({11, 0})(0, 0)), 0.0, 2e-2);
  EXPECT_NEAR(std::abs(bank.unitaries.at({1, 0})(0, 0)), 1.0, 1e-3);
  EXPECT_LT(bank.p_err, 1e-3);
}

TEST(Zeeman, ErrorDipsAtTwo) {
  EXPECT_LT(p_err(GradientPulseConfig::from_rho(10, 2.0)), 0.02);
  EXPECT_GT(p_err(GradientPulseConfig::from_rho(10, 1.5)), 0.1);
}

TEST(Zeeman, InsensitiveToSeparation) {
  double lo = 1.0, hi = 0.0;
  for (int n : {10, 14, 20}) {
    const double e = p_err(GradientPulseConfig::from_rho(n, 2.0));
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  EXPECT_LT((hi - lo) / hi, 0.2);
}

TEST(Zeeman, ResidualMatchesAcShiftAtTwo) {
  const auto c = fringe_phase_correction(GradientPulseConfig::from_rho(10, 2.0));
  EXPECT_NEAR(c.residual, -11 * pi / 240, 0.02 * pi);
}

TEST(Zeeman, ResidualFollowsInverseRho) {
  std::vector<double> scaled;
  for (double rho : {1.0, 2.0, 3.0, 4.0})
    scaled.push_back(rho * fringe_phase_correction(GradientPulseConfig::from_rho(10, rho)).residual);
  double mean = 0.0;
  for (double s : scaled) mean += s / scaled.size();
  for (double s : scaled) EXPECT_LT(std::abs(s - mean), 0.2 * std::abs(mean));
}

TEST(Zeeman, ToleranceTooTightFails) {
  auto cfg = GradientPulseConfig::from_rho(10, 2.0);
  cfg.tolerance = 1e-30;
  EXPECT_THROW((void)simulate_gradient_pulse(cfg), IntegratorFailure);
}

TEST(Zeeman, ScanIsPureFunctionOfInput) {
  const std::vector<double> rhos{1.0, 2.0, 3.5};
  const auto a = zeeman_scan(10, rhos, 1.0, 1);
  const auto b = zeeman_scan(10, rhos, 1.0, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].p_err, b[i].p_err);
    EXPECT_EQ(a[i].residual_phase, b[i].residual_phase);
  }
}
