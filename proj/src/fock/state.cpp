#include "exchlab/fock/state.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "exchlab/errors.hpp"

namespace exchlab::fock {

namespace {

bool negligible(Amplitude a) { return std::abs(a) < TwoParticleState::kPruneThreshold; }

}  // namespace

Amplitude TwoParticleState::amplitude(const ModeLabel& a, const ModeLabel& b) const {
  if (a == b) {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? Amplitude{} : it->second;
  }
  const bool swapped = b < a;
  auto it = terms_.find(swapped ? Key{b, a} : Key{a, b});
  if (it == terms_.end()) return {};
  return swapped ? stats_.sign() * it->second : it->second;
}

double TwoParticleState::multiplicity(const Key& key) const noexcept {
  return (key.first == key.second && !stats_.is_fermion()) ? 2.0 : 1.0;
}

double TwoParticleState::norm_squared() const {
  double total = 0.0;
  for (const auto& [key, amp] : terms_) total += multiplicity(key) * std::norm(amp);
  return total;
}

void TwoParticleState::accumulate(const ModeLabel& a, const ModeLabel& b, Amplitude amp) {
  if (a == b) {
    if (stats_.is_fermion()) return;
    terms_[{a, b}] += amp;
    return;
  }
  if (b < a) {
    terms_[{b, a}] += stats_.sign() * amp;
  } else {
    terms_[{a, b}] += amp;
  }
}

void TwoParticleState::prune() {
  std::erase_if(terms_, [](const auto& kv) { return negligible(kv.second); });
}

void TwoParticleState::scale(Amplitude factor) {
  for (auto& [key, amp] : terms_) amp *= factor;
  prune();
}

std::vector<ModeLabel> TwoParticleState::occupied_modes() const {
  std::set<ModeLabel> modes;
  for (const auto& [key, amp] : terms_) {
    modes.insert(key.first);
    modes.insert(key.second);
  }
  return {modes.begin(), modes.end()};
}

TwoParticleState canonical_order(std::span<const RawTerm> raw, Statistics stats) {
  TwoParticleState out(stats);
  for (const auto& t : raw) out.accumulate(t.first, t.second, t.amplitude);
  out.prune();
  return out;
}

TwoParticleState product_state(std::span<const std::pair<ModeLabel, Amplitude>> first,
                               std::span<const std::pair<ModeLabel, Amplitude>> second,
                               Statistics stats) {
  TwoParticleState out(stats);
  for (const auto& [m1, c1] : first)
    for (const auto& [m2, c2] : second) out.accumulate(m1, m2, c1 * c2);
  out.prune();
  return out;
}

ModeMap::Image ModeMap::image_of(const ModeLabel& m) const {
  auto it = images_.find(m);
  if (it == images_.end()) return {{m, Amplitude{1.0}}};
  return it->second;
}

namespace {

Amplitude inner(const ModeMap::Image& a, const ModeMap::Image& b) {
  Amplitude s{};
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b)
      if (ma == mb) s += std::conj(ca) * cb;
  return s;
}

}  // namespace

TwoParticleState apply_mode_map(const TwoParticleState& state, const ModeMap& map,
                                double isometry_tolerance) {
  const auto modes = state.occupied_modes();
  std::vector<ModeMap::Image> images;
  images.reserve(modes.size());
  for (const auto& m : modes) images.push_back(map.image_of(m));

  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i; j < images.size(); ++j) {
      const Amplitude g = inner(images[i], images[j]);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(g - expected) > isometry_tolerance) {
        throw NonIsometricMap("images of " + to_string(modes[i]) + " and " + to_string(modes[j]) +
                              " have inner product " + std::to_string(std::abs(g)));
      }
    }
  }

  auto image_index = [&](const ModeLabel& m) {
    return static_cast<std::size_t>(std::lower_bound(modes.begin(), modes.end(), m) - modes.begin());
  };

  TwoParticleState out(state.statistics());
  for (const auto& [key, amp] : state.terms()) {
    const auto& img1 = images[image_index(key.first)];
    const auto& img2 = images[image_index(key.second)];
    for (const auto& [k, c1] : img1)
      for (const auto& [l, c2] : img2) out.accumulate(k, l, amp * c1 * c2);
  }
  out.prune();
  return out;
}

TwoParticleState apply_local_unitary(const TwoParticleState& state, const Site& site,
                                     const SpinMatrix& u) {
  const double defect = (u.adjoint() * u - SpinMatrix::Identity()).cwiseAbs().maxCoeff();
  if (!(defect <= 1e-9)) {
    throw NotUnitary("spin matrix deviates from unitarity by " + std::to_string(defect));
  }
  ModeMap map;
  for (const auto& m : state.occupied_modes()) {
    if (m.site != site) continue;
    const int col = m.spin == Spin::up ? 0 : 1;
    ModeMap::Image img;
    for (int row = 0; row < 2; ++row) {
      if (u(row, col) == Amplitude{}) continue;
      img.push_back({{site, row == 0 ? Spin::up : Spin::down, m.vib}, u(row, col)});
    }
    map.set(m, std::move(img));
  }
  if (map.empty()) return state;
  return apply_mode_map(state, map);
}

ParityResult spin_parity(const TwoParticleState& state, const Site& a, const Site& b) {
  if (a == b) throw EmptyPostSelection("parity needs two distinct sites");
  double weight = 0.0;
  double signed_weight = 0.0;
  for (const auto& [key, amp] : state.terms()) {
    const Site s1 = key.first.site;
    const Site s2 = key.second.site;
    if (!((s1 == a && s2 == b) || (s1 == b && s2 == a))) continue;
    const double w = std::norm(amp);
    weight += w;
    signed_weight += w * spin_sign(key.first.spin) * spin_sign(key.second.spin);
  }
  const double total = state.norm_squared();
  if (weight < 1e-15 || total <= 0.0) {
    throw EmptyPostSelection("no weight with one particle at each of sites " + to_string(a) +
                             " and " + to_string(b));
  }
  return {signed_weight / weight, weight / total};
}

ParityResult same_site_parity(const TwoParticleState& state, const Site& site) {
  double weight = 0.0;
  double signed_weight = 0.0;
  for (const auto& [key, amp] : state.terms()) {
    if (key.first.site != site || key.second.site != site) continue;
    const double w = state.multiplicity(key) * std::norm(amp);
    weight += w;
    signed_weight += w * spin_sign(key.first.spin) * spin_sign(key.second.spin);
  }
  const double total = state.norm_squared();
  if (total <= 0.0) return {};
  return {weight > 0.0 ? signed_weight / weight : 0.0, weight / total};
}

Amplitude overlap(const TwoParticleState& a, const TwoParticleState& b) {
  if (a.statistics() != b.statistics()) {
    throw StatisticsMismatch("overlap between " + to_string(a.statistics()) + " and " +
                             to_string(b.statistics()) + " states");
  }
  Amplitude s{};
  const auto& small = a.size() <= b.size() ? a.terms() : b.terms();
  const auto& large = a.size() <= b.size() ? b.terms() : a.terms();
  for (const auto& [key, amp] : small) {
    auto it = large.find(key);
    if (it == large.end()) continue;
    const Amplitude ca = &small == &a.terms() ? amp : it->second;
    const Amplitude cb = &small == &a.terms() ? it->second : amp;
    s += a.multiplicity(key) * std::conj(ca) * cb;
  }
  return s;
}

}  // namespace exchlab::fock
