#pragma once

// Marker/filler decomposition of binary windows.
//
// A marker is an occurrence of 011. Two occurrences cannot overlap since the
// block starts with its only 0, so the markers split the window into
// alternating marker and filler intervals. Intervals that touch the window
// edge could extend past it; they are flagged as censored instead of being
// classified.

#include <array>
#include <vector>

#include "json.hpp"
#include "nsb/product_measure.hpp"
#include "nsb/window.hpp"

namespace nsb {

struct Interval {
  Index lo = 0;
  Index hi = -1;  // inclusive
  Index length() const { return hi - lo + 1; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Filler {
  Interval span;
  bool censored = false;
  friend bool operator==(const Filler&, const Filler&) = default;
};

struct SpecialFiller {
  Index initial = 0;
  int bit = 0;  // 1 for 10, 0 for 01
  friend bool operator==(const SpecialFiller&, const SpecialFiller&) = default;
};

struct MarkerDecomposition {
  Index start = 0;
  Index end = -1;
  std::vector<Interval> markers;
  std::vector<Filler> fillers;        // in index order, censored ones included
  std::vector<SpecialFiller> special; // uncensored length-2 fillers 01 / 10
  bool left_censored = false;         // leftmost interval is a censored filler
  bool right_censored = false;
};

inline constexpr std::array<Symbol, 8> kGoodBlock01 = {0, 1, 1, 0, 1, 0, 1, 1};
inline constexpr std::array<Symbol, 8> kGoodBlock10 = {0, 1, 1, 1, 0, 0, 1, 1};

MarkerDecomposition decompose(const SymbolWindow& w);
std::vector<SpecialFiller> special_fillers(const MarkerDecomposition& d);

/// Starts 8n + offset (n any integer) whose full 8-block lies in the window
/// and equals 011 01 011 or 011 10 011.
std::vector<Index> good_intervals(const SymbolWindow& w, Index offset = 0);

/// Exact probability that the block starting at i is one of the two good blocks.
double good_prob(const FiniteProductMeasure& m, Index i);
/// Infimum of good_prob over the range.
double good_prob_lower_bound(const FiniteProductMeasure& m, IndexRange range);

nlohmann::json to_json(const MarkerDecomposition& d);

}  // namespace nsb
