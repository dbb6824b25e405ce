#pragma once

// Data-parallel reductions over integer index ranges.
//
// Every parallel kernel here has a serial counterpart in nsb::kernels::serial
// that is the plain left-to-right loop. The parallel versions split the range
// into fixed-size chunks (independent of the thread count), reduce each chunk
// left to right, and merge the chunk partials with a fixed pairwise tree, so
// their output bits never depend on how many threads ran.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "nsb/types.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nsb::kernels {

inline constexpr Index kChunk = 4096;

namespace serial {

template <class F>
double sum(Index lo, Index hi, F&& f) {
  double acc = 0.0;
  for (Index n = lo; n <= hi; ++n) acc += f(n);
  return acc;
}

template <class F>
double min(Index lo, Index hi, F&& f) {
  double best = std::numeric_limits<double>::infinity();
  for (Index n = lo; n <= hi; ++n) best = std::min(best, f(n));
  return best;
}

template <class F>
void for_each(Index lo, Index hi, F&& f) {
  for (Index n = lo; n <= hi; ++n) f(n);
}

}  // namespace serial

inline double pairwise_merge(std::vector<double> parts) {
  if (parts.empty()) return 0.0;
  while (parts.size() > 1) {
    std::size_t half = (parts.size() + 1) / 2;
    for (std::size_t i = 0; i + half < parts.size(); ++i) parts[i] += parts[i + half];
    parts.resize(half);
  }
  return parts.front();
}

template <class F>
double sum(Index lo, Index hi, F&& f) {
  if (hi < lo) return 0.0;
  const Index chunks = (hi - lo) / kChunk + 1;
  std::vector<double> parts(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) {
    const Index a = lo + c * kChunk;
    const Index b = std::min(hi, a + kChunk - 1);
    double acc = 0.0;
    for (Index n = a; n <= b; ++n) acc += f(n);
    parts[static_cast<std::size_t>(c)] = acc;
  }
  return pairwise_merge(std::move(parts));
}

// min is order-independent, so no chunk bookkeeping is needed for determinism.
template <class F>
double min(Index lo, Index hi, F&& f) {
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : best) schedule(static)
  for (Index n = lo; n <= hi; ++n) best = std::min(best, f(n));
  return best;
}

template <class F>
void for_each(Index lo, Index hi, F&& f) {
#pragma omp parallel for schedule(static)
  for (Index n = lo; n <= hi; ++n) f(n);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace nsb::kernels
