#include "nsb/marker_filler.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "nsb/matching.hpp"
#include "nsb/sampling.hpp"

namespace nsb {
namespace {

SymbolWindow word(std::uint32_t bits, int len, Index start = 0) {
  SymbolWindow w;
  w.start = start;
  for (int i = len - 1; i >= 0; --i) w.values.push_back(static_cast<Symbol>((bits >> i) & 1u));
  return w;
}

// Structural checks shared with the acceptance suite's exhaustive sweep.
::testing::AssertionResult well_formed(const SymbolWindow& w, const MarkerDecomposition& d) {
  Index cursor = w.start;
  std::size_t mi = 0, fi = 0;
  bool last_was_filler = false;
  while (mi < d.markers.size() || fi < d.fillers.size()) {
    const bool marker = fi >= d.fillers.size() ||
                        (mi < d.markers.size() && d.markers[mi].lo < d.fillers[fi].span.lo);
    const Interval iv = marker ? d.markers[mi++] : d.fillers[fi++].span;
    if (iv.lo != cursor) return ::testing::AssertionFailure() << "gap or overlap at " << cursor;
    if (marker) {
      if (iv.length() != 3 || w.at(iv.lo) != 0 || w.at(iv.lo + 1) != 1 || w.at(iv.lo + 2) != 1) {
        return ::testing::AssertionFailure() << "bad marker at " << iv.lo;
      }
      last_was_filler = false;
    } else {
      if (last_was_filler) return ::testing::AssertionFailure() << "two fillers in a row at " << iv.lo;
      for (Index i = iv.lo; i + 2 <= iv.hi; ++i) {
        if (w.at(i) == 0 && w.at(i + 1) == 1 && w.at(i + 2) == 1) {
          return ::testing::AssertionFailure() << "filler contains 011 at " << i;
        }
      }
      last_was_filler = true;
    }
    cursor = iv.hi + 1;
  }
  if (cursor != w.end() + 1) return ::testing::AssertionFailure() << "did not cover the window";
  return ::testing::AssertionSuccess();
}

TEST(Decompose, SampleRealization) {
  const auto d = decompose(bits_from_string("01101011"));
  ASSERT_EQ(d.markers.size(), 2u);
  EXPECT_EQ(d.markers[0], (Interval{0, 2}));
  EXPECT_EQ(d.markers[1], (Interval{5, 7}));
  ASSERT_EQ(d.fillers.size(), 1u);
  EXPECT_EQ(d.fillers[0], (Filler{{3, 4}, false}));
  ASSERT_EQ(d.special.size(), 1u);
  EXPECT_EQ(d.special[0], (SpecialFiller{3, 0}));
  EXPECT_FALSE(d.left_censored);
  EXPECT_FALSE(d.right_censored);
}

TEST(Decompose, NoMarkers) {
  const auto d = decompose(bits_from_string("000000", 10));
  EXPECT_TRUE(d.markers.empty());
  ASSERT_EQ(d.fillers.size(), 1u);
  EXPECT_EQ(d.fillers[0], (Filler{{10, 15}, true}));
  EXPECT_TRUE(d.special.empty());
}

TEST(Decompose, AdjacentMarkers) {
  const auto d = decompose(bits_from_string("011011"));
  EXPECT_EQ(d.markers.size(), 2u);
  EXPECT_TRUE(d.fillers.empty());
}

TEST(Decompose, SpecialBits) {
  const auto ten = decompose(bits_from_string("01110011"));
  ASSERT_EQ(special_fillers(ten).size(), 1u);
  EXPECT_EQ(special_fillers(ten)[0], (SpecialFiller{3, 1}));
  EXPECT_TRUE(decompose(bits_from_string("01100011")).special.empty());  // 00
  EXPECT_TRUE(decompose(bits_from_string("01111011")).special.empty());  // 11
  // An edge filler of length two is censored, not special.
  EXPECT_TRUE(decompose(bits_from_string("10011")).special.empty());
}

TEST(Decompose, NegativeStart) {
  const auto d = decompose(bits_from_string("01101011", -4));
  EXPECT_EQ(d.special[0].initial, -1);
}

TEST(Decompose, ExhaustiveUpTo16) {
  for (int len = 0; len <= 16; ++len) {
    for (std::uint32_t b = 0; b < (1u << len); ++b) {
      const auto w = word(b, len, -3);
      const auto d = decompose(w);
      ASSERT_TRUE(well_formed(w, d)) << len << ":" << b;
      for (std::size_t i = 1; i < d.markers.size(); ++i) ASSERT_GT(d.markers[i].lo, d.markers[i - 1].hi);
      for (const auto& s : d.special) {
        ASSERT_NE(w.at(s.initial), w.at(s.initial + 1));
        ASSERT_EQ(s.bit, w.at(s.initial));
      }
    }
  }
}

TEST(Decompose, NonBinaryRejected) {
  SymbolWindow w;
  w.values = {0, 2, 1};
  EXPECT_THROW(decompose(w), PreconditionError);
}

TEST(GoodIntervals, Blocks) {
  EXPECT_EQ(good_intervals(bits_from_string("01101011")), (std::vector<Index>{0}));
  EXPECT_EQ(good_intervals(bits_from_string("01110011")), (std::vector<Index>{0}));
  EXPECT_TRUE(good_intervals(bits_from_string("00000011")).empty());
  // Offset and alignment with a negative start.
  const auto w = bits_from_string("1101101011", -10);
  EXPECT_EQ(good_intervals(w), (std::vector<Index>{-8}));
  EXPECT_TRUE(good_intervals(w, 6).empty());
}

TEST(GoodProb, Values) {
  EXPECT_DOUBLE_EQ(good_prob(make_iid({0.5, 0.5}), 17), 1.0 / 128);
  // Oracle: both blocks have three 0s and five 1s.
  EXPECT_NEAR(good_prob(make_iid({0.3, 0.7}), 0), 2 * std::pow(0.3, 3) * std::pow(0.7, 5), 1e-17);
  EXPECT_NEAR(good_prob(make_iid({0.3, 0.7}), 0), 0.00907578, 1e-8);
  const auto nu = make_nu_c(1.0 / 6);
  const double delta = doeblin_delta(nu, {-100, 100}).delta;
  EXPECT_GE(good_prob_lower_bound(nu, {-100, 100}), std::pow(delta, 8));
}

TEST(GoodToAB, Realization) {
  const auto w = bits_from_string("01101011" "00000011" "10011011" "01110011");
  const auto [zprime, z] = good_to_ab(w);
  EXPECT_EQ(zprime.to_string(), "bbbabbbbbbbbbbbbabbbbbbbbbbabbbb");
  EXPECT_EQ(z.to_string(), "bbbabbbbbbbbbbbbbbbbbbbbbbbabbbb");
  EXPECT_TRUE(dominates(z, zprime));
  EXPECT_FALSE(dominates(zprime, z));
}

TEST(GoodToAB, NoMarkersAndAllGood) {
  const auto [zp, z] = good_to_ab(bits_from_string("1111000011110000"));
  EXPECT_EQ(zp.count(Letter::a), 0);
  EXPECT_EQ(z.count(Letter::a), 0);
  std::string s;
  for (int i = 0; i < 5; ++i) s += i % 2 ? "01110011" : "01101011";
  const auto [zp2, z2] = good_to_ab(bits_from_string(s, 16));
  for (Index n = 16; n < 56; ++n) EXPECT_EQ(z2.at(n) == Letter::a, (n - 3) % 8 == 0) << n;
  EXPECT_TRUE(dominates(z2, zp2));
}

TEST(GoodBlocks, EmpiricalRate) {
  const Index blocks = 200000;
  const auto w = sample_window(make_iid({0.5, 0.5}), {0, 8 * blocks - 1}, SeedStream(12));
  const double p = 1.0 / 128;
  const double hits = static_cast<double>(good_intervals(w).size());
  EXPECT_LT(std::abs(hits - blocks * p), 4 * std::sqrt(blocks * p * (1 - p)));
}

}  // namespace
}  // namespace nsb
