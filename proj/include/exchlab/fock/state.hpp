#pragma once

#include <Eigen/Core>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "exchlab/fock/mode.hpp"

namespace exchlab::fock {

/// A term a†_{first} a†_{second} |0> with an amplitude, in any operator order.
struct RawTerm {
  ModeLabel first;
  ModeLabel second;
  Amplitude amplitude;
};

/// Two identical particles over labelled modes, stored in normal order:
///
///   |psi> = sum_{m1 <= m2} c(m1, m2) a†_{m1} a†_{m2} |0>
///
/// A bosonic doubly-occupied pair is stored once; its norm contribution is
/// 2|c|^2. Fermionic states never hold an m1 == m2 term. Amplitudes with
/// modulus below `kPruneThreshold` are dropped after every operation.
class TwoParticleState {
 public:
  using Key = std::pair<ModeLabel, ModeLabel>;
  using TermMap = std::map<Key, Amplitude>;

  static constexpr double kPruneThreshold = 1e-14;

  explicit TwoParticleState(Statistics stats = Statistics::boson()) : stats_(stats) {}

  [[nodiscard]] Statistics statistics() const noexcept { return stats_; }
  [[nodiscard]] const TermMap& terms() const noexcept { return terms_; }
  [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

  /// Amplitude of the canonical pair (sorted internally; sign applied).
  [[nodiscard]] Amplitude amplitude(const ModeLabel& a, const ModeLabel& b) const;

  [[nodiscard]] double norm_squared() const;

  /// Weight of a stored term in the norm: 2 for bosonic double occupancy.
  [[nodiscard]] double multiplicity(const Key& key) const noexcept;

  /// Adds amp * a†_a a†_b, reordering with the exchange sign if needed.
  void accumulate(const ModeLabel& a, const ModeLabel& b, Amplitude amp);

  /// Removes amplitudes below the prune threshold.
  void prune();

  void scale(Amplitude factor);

  /// Sorted list of distinct modes carrying amplitude.
  [[nodiscard]] std::vector<ModeLabel> occupied_modes() const;

 private:
  Statistics stats_;
  TermMap terms_;
};

/// Sorts every pair into canonical order, applying the exchange sign for
/// swapped pairs, dropping fermionic double occupancy and merging like terms.
[[nodiscard]] TwoParticleState canonical_order(std::span<const RawTerm> raw, Statistics stats);

/// Product of two single-particle superpositions, (sum_i u_i a†_i)(sum_j w_j a†_j)|0>.
[[nodiscard]] TwoParticleState product_state(
    std::span<const std::pair<ModeLabel, Amplitude>> first,
    std::span<const std::pair<ModeLabel, Amplitude>> second, Statistics stats);

/// Linear map on creation operators, a†_m -> sum_k image(m)_k a†_k. Modes
/// without an entry map to themselves.
class ModeMap {
 public:
  using Image = std::vector<std::pair<ModeLabel, Amplitude>>;

  void set(const ModeLabel& from, Image image) { images_[from] = std::move(image); }
  [[nodiscard]] const std::map<ModeLabel, Image>& images() const noexcept { return images_; }
  [[nodiscard]] Image image_of(const ModeLabel& m) const;
  [[nodiscard]] bool empty() const noexcept { return images_.empty(); }

 private:
  std::map<ModeLabel, Image> images_;
};

/// Applies `map` to both creation operators and re-canonicalises.
/// Throws NonIsometricMap when the images of the occupied modes are not
/// orthonormal to within `isometry_tolerance`.
[[nodiscard]] TwoParticleState apply_mode_map(const TwoParticleState& state, const ModeMap& map,
                                              double isometry_tolerance = 1e-9);

using SpinMatrix = Eigen::Matrix2cd;

/// Transforms every mode at `site` by a†_{s} -> sum_{s'} u(s', s) a†_{s'},
/// with row/column 0 = up and 1 = down. Throws NotUnitary.
[[nodiscard]] TwoParticleState apply_local_unitary(const TwoParticleState& state, const Site& site,
                                                   const SpinMatrix& u);

struct ParityResult {
  double parity = 0.0;       ///< <Pi> within the post-selected subspace
  double probability = 0.0;  ///< weight of that subspace
};

/// Spin parity conditioned on finding exactly one particle at each of two
/// distinct sites. Pi = +1 for aligned spins, -1 for anti-aligned. Throws
/// EmptyPostSelection when the subspace weight is below 1e-15.
[[nodiscard]] ParityResult spin_parity(const TwoParticleState& state, const Site& a, const Site& b);

/// Parity and weight of the doubly-occupied component at a single site.
[[nodiscard]] ParityResult same_site_parity(const TwoParticleState& state, const Site& site);

/// <a|b> in the canonical basis. Throws StatisticsMismatch.
[[nodiscard]] Amplitude overlap(const TwoParticleState& a, const TwoParticleState& b);

/// Canonical text form:
///   statistics: boson|fermion
///   site,spin,vib | site,spin,vib | re,im
/// where a site is `x` on a 1D lattice or `x;y` otherwise.
[[nodiscard]] std::string to_text(const TwoParticleState& state);
[[nodiscard]] TwoParticleState from_text(const std::string& text);

}  // namespace exchlab::fock
