#include "nsb/marker_filler.hpp"

#include <algorithm>
#include <cmath>

#include "nsb/kernels.hpp"

namespace nsb {

namespace {

void require_binary(const SymbolWindow& w) {
  for (Symbol s : w.values) {
    if (s != 0 && s != 1) throw PreconditionError("binary window required");
  }
}

}  // namespace

MarkerDecomposition decompose(const SymbolWindow& w) {
  require_binary(w);
  MarkerDecomposition d;
  d.start = w.start;
  d.end = w.end();
  const auto& x = w.values;
  const std::size_t len = x.size();
  for (std::size_t i = 0; i + 2 < len; ++i) {
    if (x[i] == 0 && x[i + 1] == 1 && x[i + 2] == 1) {
      const Index lo = w.start + static_cast<Index>(i);
      d.markers.push_back({lo, lo + 2});
      i += 2;
    }
  }

  if (d.markers.empty()) {
    if (len > 0) d.fillers.push_back({{d.start, d.end}, true});
    d.left_censored = d.right_censored = len > 0;
    return d;
  }

  if (d.markers.front().lo > d.start) {
    d.fillers.push_back({{d.start, d.markers.front().lo - 1}, true});
    d.left_censored = true;
  }
  for (std::size_t k = 0; k + 1 < d.markers.size(); ++k) {
    const Interval gap{d.markers[k].hi + 1, d.markers[k + 1].lo - 1};
    if (gap.length() <= 0) continue;
    d.fillers.push_back({gap, false});
    if (gap.length() == 2) {
      const Symbol a = w.at(gap.lo), b = w.at(gap.hi);
      if (a != b) d.special.push_back({gap.lo, a == 1 ? 1 : 0});
    }
  }
  if (d.markers.back().hi < d.end) {
    d.fillers.push_back({{d.markers.back().hi + 1, d.end}, true});
    d.right_censored = true;
  }
  return d;
}

std::vector<SpecialFiller> special_fillers(const MarkerDecomposition& d) { return d.special; }

std::vector<Index> good_intervals(const SymbolWindow& w, Index offset) {
  require_binary(w);
  std::vector<Index> out;
  if (w.size() < 8) return out;
  // first s >= start with s == offset (mod 8)
  Index r = (w.start - offset) % 8;
  if (r < 0) r += 8;
  Index s = r == 0 ? w.start : w.start + (8 - r);
  for (; s + 7 <= w.end(); s += 8) {
    const auto* p = &w.values[static_cast<std::size_t>(s - w.start)];
    if (std::equal(kGoodBlock01.begin(), kGoodBlock01.end(), p) ||
        std::equal(kGoodBlock10.begin(), kGoodBlock10.end(), p)) {
      out.push_back(s);
    }
  }
  return out;
}

double good_prob(const FiniteProductMeasure& m, Index i) {
  if (!m.is_binary()) throw PreconditionError("good_prob: two-symbol alphabet required");
  double p01 = 1.0, p10 = 1.0;
  for (Index j = 0; j < 8; ++j) {
    p01 *= m.mass(i + j, kGoodBlock01[static_cast<std::size_t>(j)]);
    p10 *= m.mass(i + j, kGoodBlock10[static_cast<std::size_t>(j)]);
  }
  return p01 + p10;
}

double good_prob_lower_bound(const FiniteProductMeasure& m, IndexRange range) {
  if (!m.is_binary()) throw PreconditionError("good_prob: two-symbol alphabet required");
  if (range.empty()) return 0.0;
  return kernels::min(range.lo, range.hi, [&](Index i) { return good_prob(m, i); });
}

nlohmann::json to_json(const MarkerDecomposition& d) {
  nlohmann::json intervals = nlohmann::json::array();
  std::size_t mi = 0, fi = 0;
  // merge markers and fillers back into index order
  while (mi < d.markers.size() || fi < d.fillers.size()) {
    const bool take_marker =
        fi >= d.fillers.size() ||
        (mi < d.markers.size() && d.markers[mi].lo < d.fillers[fi].span.lo);
    if (take_marker) {
      intervals.push_back({{"lo", d.markers[mi].lo}, {"hi", d.markers[mi].hi}, {"label", "marker"}});
      ++mi;
      continue;
    }
    const Filler& f = d.fillers[fi++];
    std::string label = "filler";
    if (f.censored) {
      label = "censored";
    } else if (std::any_of(d.special.begin(), d.special.end(),
                           [&](const SpecialFiller& s) { return s.initial == f.span.lo; })) {
      label = "special";
    }
    intervals.push_back({{"lo", f.span.lo}, {"hi", f.span.hi}, {"label", label}});
  }
  nlohmann::json special = nlohmann::json::array();
  for (const auto& s : d.special) special.push_back({{"index", s.initial}, {"bit", s.bit}});
  return {{"start", d.start},
          {"end", d.end},
          {"intervals", intervals},
          {"special", special},
          {"left_censored", d.left_censored},
          {"right_censored", d.right_censored}};
}

}  // namespace nsb
