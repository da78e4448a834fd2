#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "exchlab/fock/mode.hpp"
#include "exchlab/rotor/basis.hpp"
#include "exchlab/rotor/ramp.hpp"

namespace exchlab::rotor {

enum class Method { eigenframe, full_banded };

[[nodiscard]] const char* to_string(Method m);
[[nodiscard]] Method method_from_string(const std::string& s);

struct PropagationOptions {
  Method method = Method::full_banded;
  double dt = 1e-8;       ///< s, Crank-Nicolson step upper bound
  int k = 24;             ///< instantaneous states kept by the eigenframe method
  int eigen_grid = 2001;  ///< eigen-decompositions along the ramp (eigenframe)
  int substeps = 8;       ///< exponential-midpoint steps per grid interval (eigenframe)
  int samples = 401;      ///< recorded trajectory points
  int threads = 1;
};

struct TrajectoryPoint {
  double t = 0.0;
  double a = 0.0;
  double ground_overlap2 = 0.0;  ///< |<phi_0(a(t))|psi(t)>|^2
  double excited_overlap2 = 0.0; ///< |<phi_1(a(t))|psi(t)>|^2
  double norm = 1.0;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  Eigen::VectorXcd final_state;  ///< coefficients in the sector basis
  double min_ground_overlap2 = 1.0;
  double max_norm_drift = 0.0;
  double final_ground_population = 0.0;
};

/// Ground state of H(a) as a complex coefficient vector.
[[nodiscard]] Eigen::VectorXcd ground_state(const LinearHamiltonian& h, double a);

/// Integrates i d psi/dt = H(a(t)) psi over the schedule. Throws
/// IntegratorFailure when the norm drifts past 1e-8.
[[nodiscard]] Trajectory propagate(const LinearHamiltonian& h, const RampSchedule& schedule,
                                   const Eigen::VectorXcd& initial, const PropagationOptions& options = {});

struct MethodComparison {
  Trajectory full;
  Trajectory eigenframe;
  double population_difference = 0.0;  ///< final ground-state population
};

/// Runs both backends. Throws MethodDisagreement above `limit`.
[[nodiscard]] MethodComparison cross_validate(const LinearHamiltonian& h, const RampSchedule& schedule,
                                              const Eigen::VectorXcd& initial, const PropagationOptions& options = {},
                                              double limit = 1e-2);

/// Maps a cosine-sector vector into the matching exponential basis.
[[nodiscard]] Eigen::VectorXcd to_full_basis(const AngularBasis& cosine, const Eigen::VectorXcd& v,
                                             const AngularBasis& full);

/// Weight of the sine (reflection-partner) component of an exponential-basis vector.
[[nodiscard]] double sine_population(const AngularBasis& full, const Eigen::VectorXcd& v);

/// Expectation of reflection about theta = pi/2 for a cosine- or sine-sector vector.
[[nodiscard]] double reflection_parity(const AngularBasis& basis, const Eigen::VectorXcd& v);

struct ParityTransfer {
  fock::Statistics stats;
  double p_n0_like = 0.0;  ///< even about the final well centre
  double p_n1_like = 0.0;  ///< odd about the final well centre
  double min_ground_overlap2 = 0.0;
  double final_parity = 0.0;          ///< reflection parity of the final state
  double forbidden_population = 0.0;  ///< sine weight after a full-basis run
  Trajectory trajectory;
};

/// Starts from the ground state of the statistics' cosine sector at a_start and
/// reports where it ends. With `superselection_check` the ramp is repeated in
/// the exponential basis and the sine weight is measured.
[[nodiscard]] ParityTransfer parity_transfer(const RotorModel& model, fock::Statistics stats,
                                             const RampSchedule& schedule, int N,
                                             const PropagationOptions& options = {},
                                             bool superselection_check = true);

}  // namespace exchlab::rotor
