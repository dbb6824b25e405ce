#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsb/types.hpp"

namespace nsb {

/// A finite sample x_start, ..., x_end together with its provenance.
template <class T>
struct Window {
  Index start = 0;
  std::vector<T> values;
  std::uint64_t seed = 0;
  std::string source;

  Index size() const { return static_cast<Index>(values.size()); }
  Index end() const { return start + size() - 1; }  // inclusive
  IndexRange range() const { return {start, end()}; }
  bool contains(Index n) const { return n >= start && n <= end(); }

  const T& at(Index n) const { return values.at(static_cast<std::size_t>(n - start)); }
  T& at(Index n) { return values.at(static_cast<std::size_t>(n - start)); }
};

using SymbolWindow = Window<Symbol>;
using RealWindow = Window<double>;

/// Binary window from a string of '0'/'1' characters.
inline SymbolWindow bits_from_string(const std::string& s, Index start = 0) {
  SymbolWindow w;
  w.start = start;
  w.values.reserve(s.size());
  for (char c : s) w.values.push_back(c == '1' ? 1 : 0);
  w.source = "literal";
  return w;
}

}  // namespace nsb
