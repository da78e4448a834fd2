#pragma once

#include <Eigen/Core>
#include <vector>

#include "exchlab/rotor/basis.hpp"

namespace exchlab::rotor {

struct Spectrum {
  Eigen::VectorXd values;   ///< ascending, rad/s
  Eigen::MatrixXd vectors;  ///< orthonormal columns
};

/// Lowest k eigenpairs of a banded symmetric matrix. Throws ConvergenceFailure.
[[nodiscard]] Spectrum spectrum(const BandedSymmetric& h, int k);

/// All eigenpairs.
[[nodiscard]] Spectrum full_spectrum(const BandedSymmetric& h);

struct TruncationChoice {
  int N = 0;
  double relative_change = 0.0;  ///< max over a of the lowest-k change on doubling N
};

/// Doubles N from `N_start` until the lowest `k` levels, measured from the
/// classical potential minimum, change by less than `tolerance` (relative) at
/// every a in `a_values`. Throws ConvergenceFailure past `N_max`.
[[nodiscard]] TruncationChoice converge_truncation(const RotorModel& model, Sector sector,
                                                   const std::vector<double>& a_values, int k = 8,
                                                   double tolerance = 1e-10, int N_start = 128,
                                                   int N_max = 8192);

/// gamma(a) = sum_{n>0} |<phi_n|dH/da|phi_0>| / (E_n - E_0)^2 over the lowest k states.
/// Throws DegenerateGroundState.
[[nodiscard]] double adiabaticity_perturbative(const LinearHamiltonian& h, double a, int k = 24);

/// gamma(a) = sum_{n>0} |<d phi_n/da|phi_0>| / (E_n - E_0) with a central
/// difference whose step is set from the gap and |dH/da phi_0|.
[[nodiscard]] double adiabaticity_finite_difference(const LinearHamiltonian& h, double a, int k = 24);

struct SpectrumRow {
  double a = 0.0;
  Eigen::VectorXd excitations;  ///< E_i - E_0, i = 1..k-1, rad/s
};

/// Excitation energies of the lowest k levels at each a.
[[nodiscard]] std::vector<SpectrumRow> sweep_spectrum(const LinearHamiltonian& h,
                                                      const std::vector<double>& a_values, int k,
                                                      int threads = 1);

struct GapSummary {
  double min_gap = 0.0;  ///< smallest E1 - E0 within the sector, rad/s
  double a_at_min = 0.0;
};

[[nodiscard]] GapSummary minimum_gap(const std::vector<SpectrumRow>& rows);

[[nodiscard]] std::vector<double> linspace(double a, double b, int count);

}  // namespace exchlab::rotor
