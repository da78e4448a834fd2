#include <gtest/gtest.h>

#include <random>

#include "../common/first_quantized.hpp"
#include "exchlab/errors.hpp"
#include "exchlab/fock/state.hpp"

using namespace exchlab;
using namespace exchlab::fock;

namespace {

const ModeLabel kA{{-1, 0}, Spin::up, 0};
const ModeLabel kB{{2, 0}, Spin::down, 0};
const ModeLabel kC{{2, 0}, Spin::up, 1};

TwoParticleState single(const ModeLabel& a, const ModeLabel& b, Statistics s, Amplitude c = 1.0) {
  const RawTerm t{a, b, c};
  return canonical_order(std::span<const RawTerm>(&t, 1), s);
}

}  // namespace

TEST(Fock, SwappedPairPicksUpExchangeSign) {
  for (auto s : {Statistics::boson(), Statistics::fermion()}) {
    const auto fwd = single(kA, kB, s);
    const auto rev = single(kB, kA, s);
    EXPECT_EQ(fwd.amplitude(kA, kB), Amplitude(1.0));
    EXPECT_EQ(rev.amplitude(kA, kB), Amplitude(s.sign()));
    EXPECT_EQ(rev.amplitude(kB, kA), Amplitude(1.0));
  }
}

TEST(Fock, FermionsCannotShareAMode) {
  const auto st = single(kC, kC, Statistics::fermion());
  EXPECT_TRUE(st.empty());
}

TEST(Fock, BosonicDoubleOccupancyCountsTwice) {
  const auto st = single(kC, kC, Statistics::boson(), 0.5);
  EXPECT_EQ(st.size(), 1u);
  EXPECT_DOUBLE_EQ(st.norm_squared(), 0.5);
}

TEST(Fock, LikeTermsMergeAndCancel) {
  const std::vector<RawTerm> raw{{kA, kB, 1.0}, {kB, kA, 1.0}};
  EXPECT_TRUE(canonical_order(raw, Statistics::fermion()).empty());
  EXPECT_NEAR(std::abs(canonical_order(raw, Statistics::boson()).amplitude(kA, kB) - 2.0), 0.0, 1e-15);
}

TEST(Fock, PrunesTinyAmplitudes) {
  const std::vector<RawTerm> raw{{kA, kB, 1e-16}, {kA, kC, 1.0}};
  EXPECT_EQ(canonical_order(raw, Statistics::boson()).size(), 1u);
}

TEST(Fock, TextRoundTrip) {
  std::mt19937_64 rng(7);
  for (auto s : {Statistics::boson(), Statistics::fermion()}) {
    const auto modes = oracle::random_modes(6, rng);
    std::vector<std::pair<ModeLabel, Amplitude>> u, w;
    for (const auto& m : modes) {
      u.emplace_back(m, Amplitude(std::sin(m.site.x + 0.3), std::cos(m.vib * 1.0)));
      w.emplace_back(m, Amplitude(m.site.y * 0.1, 0.7));
    }
    const auto st = product_state(u, w, s);
    const auto back = from_text(to_text(st));
    ASSERT_EQ(back.size(), st.size());
    EXPECT_EQ(back.statistics(), s);
    for (const auto& [k, c] : st.terms()) EXPECT_EQ(back.amplitude(k.first, k.second), c);
  }
}

TEST(Fock, MalformedTextRaisesParseError) {
  EXPECT_THROW((void)from_text("statistics: anyon\n"), ParseError);
  EXPECT_THROW((void)from_text("statistics: boson\n0,up,0 | 1,sideways,0 | 1,0\n"), ParseError);
  EXPECT_THROW((void)from_text("0,up,0 | 1,up,0 | 1,0\n"), ParseError);
}

TEST(Fock, OverlapRejectsMixedStatistics) {
  EXPECT_THROW((void)overlap(single(kA, kB, Statistics::boson()), single(kA, kB, Statistics::fermion())),
               StatisticsMismatch);
}

TEST(Fock, NonIsometricMapIsRejected) {
  ModeMap m;
  m.set(kA, {{kC, 1.0}});
  m.set(kB, {{kC, 1.0}});
  EXPECT_THROW((void)apply_mode_map(single(kA, kB, Statistics::boson()), m), NonIsometricMap);
}

TEST(Fock, NonUnitaryPulseIsRejected) {
  SpinMatrix u;
  u << 1.0, 0.1, 0.0, 1.0;
  EXPECT_THROW((void)apply_local_unitary(single(kA, kB, Statistics::boson()), kA.site, u), NotUnitary);
}

TEST(Fock, ParityNeedsOccupiedSites) {
  const auto st = single(kA, kB, Statistics::boson());
  EXPECT_THROW((void)spin_parity(st, {5, 5}, {6, 6}), EmptyPostSelection);
  const auto r = spin_parity(st, kA.site, kB.site);
  EXPECT_DOUBLE_EQ(r.parity, -1.0);
  EXPECT_DOUBLE_EQ(r.probability, 1.0);
}

TEST(Fock, SameSiteParityOfBosonPair) {
  const ModeLabel up{{0, 0}, Spin::up, 0};
  const ModeLabel dn{{0, 0}, Spin::down, 0};
  std::vector<RawTerm> raw{{up, up, 0.5}, {dn, dn, 0.5}};
  const auto r = same_site_parity(canonical_order(raw, Statistics::boson()), {0, 0});
  EXPECT_DOUBLE_EQ(r.parity, 1.0);
  EXPECT_DOUBLE_EQ(r.probability, 1.0);
}

// Property: the normal-ordered engine agrees with explicit (anti)symmetrised
// wavefunctions under random mode unitaries, local spin rotations and overlaps.
TEST(FockOracle, RandomisedEquivalence) {
  EXPECT_LE(oracle::randomised_equivalence(1000, 20240611), 1e-12);
}
