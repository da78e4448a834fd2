#pragma once

// Two-particle wavefunctions as explicit M x M amplitude matrices over an
// enumerated list of modes, psi(i, j) = <i, j|psi> with psi(j, i) = s psi(i, j).
// Used as an independent check of the normal-ordered engine.

#include <Eigen/Dense>
#include <Eigen/QR>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "exchlab/fock/state.hpp"

namespace oracle {

using exchlab::fock::Amplitude;
using exchlab::fock::ModeLabel;
using exchlab::fock::Statistics;
using exchlab::fock::TwoParticleState;
using Wave = Eigen::MatrixXcd;

inline int index_of(const std::vector<ModeLabel>& modes, const ModeLabel& m) {
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (modes[i] == m) return static_cast<int>(i);
  return -1;
}

/// a+_p a+_q |0>  ->  e_p (x) e_q + s e_q (x) e_p
inline Wave pair_wave(int p, int q, int M, double s) {
  Wave w = Wave::Zero(M, M);
  w(p, q) += 1.0;
  w(q, p) += s;
  return w;
}

/// (sum_i u_i a+_i)(sum_j v_j a+_j)|0>
inline Wave product_wave(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, double s) {
  return u * v.transpose() + s * v * u.transpose();
}

/// Engine state -> explicit wavefunction over `modes`.
inline Wave to_wave(const TwoParticleState& st, const std::vector<ModeLabel>& modes) {
  const int M = static_cast<int>(modes.size());
  const double s = st.statistics().sign();
  Wave w = Wave::Zero(M, M);
  for (const auto& [key, c] : st.terms()) {
    const int p = index_of(modes, key.first);
    const int q = index_of(modes, key.second);
    if (p < 0 || q < 0) throw std::runtime_error("mode outside oracle basis");
    w += c * pair_wave(p, q, M, s);
  }
  return w;
}

/// Mode transformation a+_m -> sum_k U(k, m) a+_k acts as psi -> U psi U^T.
inline Wave transform(const Wave& w, const Eigen::MatrixXcd& U) { return U * w * U.transpose(); }

/// <a|b> = (1/2) sum_ij conj(a_ij) b_ij for this normalisation.
inline Amplitude inner(const Wave& a, const Wave& b) { return 0.5 * (a.adjoint() * b).trace(); }

inline Eigen::MatrixXcd random_unitary(int M, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) z(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < M; ++i) q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
  return q;
}

inline Eigen::VectorXcd random_vector(int M, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(M);
  for (int i = 0; i < M; ++i) v(i) = {g(rng), g(rng)};
  return v;
}

/// M distinct mode labels scattered over a small 2D lattice, both spins and
/// a few vibrational levels.
inline std::vector<ModeLabel> random_modes(int M, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coord(-6, 6);
  std::uniform_int_distribution<int> spin(0, 1);
  std::uniform_int_distribution<int> vib(0, 2);
  std::vector<ModeLabel> modes;
  while (static_cast<int>(modes.size()) < M) {
    ModeLabel m{{coord(rng), coord(rng)}, spin(rng) ? exchlab::fock::Spin::down : exchlab::fock::Spin::up, vib(rng)};
    if (index_of(modes, m) < 0) modes.push_back(m);
  }
  return modes;
}

// Worst amplitude mismatch between the engine and the explicit wavefunction
// over `cases` random instances: product state, random mode map, local spin
// rotation and overlap, with M drawn from [2, 24].
inline double randomised_equivalence(int cases, std::uint64_t seed) {
  using namespace exchlab::fock;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(2, 24);
  double worst = 0.0;
  for (int trial = 0; trial < cases; ++trial) {
    const auto stats = trial % 2 ? Statistics::fermion() : Statistics::boson();
    const double s = stats.sign();
    const int M = size(rng);
    const auto modes = random_modes(M, rng);
    const Eigen::VectorXcd u = random_vector(M, rng);
    const Eigen::VectorXcd v = random_vector(M, rng);
    std::vector<std::pair<ModeLabel, Amplitude>> ue, ve;
    for (int i = 0; i < M; ++i) {
      ue.emplace_back(modes[i], u(i));
      ve.emplace_back(modes[i], v(i));
    }
    auto st = product_state(ue, ve, stats);
    Wave w = product_wave(u, v, s);
    worst = std::max(worst, (to_wave(st, modes) - w).cwiseAbs().maxCoeff());

    const auto U = random_unitary(M, rng);
    ModeMap map;
    for (int m = 0; m < M; ++m) {
      ModeMap::Image img;
      for (int k = 0; k < M; ++k) img.emplace_back(modes[k], U(k, m));
      map.set(modes[m], img);
    }
    st = apply_mode_map(st, map);
    w = transform(w, U);
    worst = std::max(worst, (to_wave(st, modes) - w).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(st.norm_squared() - std::real(inner(w, w))) / std::max(1.0, st.norm_squared()));

    // spin rotation on the site of the first mode, where its partner spin is in the basis
    const Site site = modes[0].site;
    const auto R = random_unitary(2, rng);
    bool closed = true;
    Eigen::MatrixXcd Umode = Eigen::MatrixXcd::Identity(M, M);
    for (int i = 0; i < M; ++i) {
      if (modes[i].site != site) continue;
      const int j = index_of(modes, {site, flipped(modes[i].spin), modes[i].vib});
      if (j < 0) {
        closed = false;
        break;
      }
      const int si = modes[i].spin == Spin::up ? 0 : 1;
      Umode(i, i) = R(si, si);
      Umode(j, i) = R(1 - si, si);
    }
    if (closed) {
      st = apply_local_unitary(st, site, R);
      w = transform(w, Umode);
      worst = std::max(worst, (to_wave(st, modes) - w).cwiseAbs().maxCoeff());
    }

    const auto other = product_state(ve, ue, stats);
    const Amplitude ov = overlap(other, st);
    const Amplitude ow = inner(product_wave(v, u, s), w);
    worst = std::max(worst, std::abs(ov - ow) / std::max(1.0, std::abs(ow)));
  }
  return worst;
}

}  // namespace oracle
