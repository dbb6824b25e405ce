#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

#include "nsb/types.hpp"

namespace nsb {

/// SplitMix64 output function. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// FNV-1a, used only to turn stream labels into keys.
constexpr std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// 53-bit uniform in [0, 1) from a 64-bit word.
constexpr double to_unit(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

/// Counter-based generator: the n-th output depends only on (key, n).
/// Satisfies UniformRandomBitGenerator so it can drive <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    counter_ += 1;
    return mix64(key_ + kGoldenGamma * counter_);
  }

  constexpr double uniform() { return to_unit((*this)()); }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Splittable seed tree. A (label, index) pair names an independent stream, so
/// coordinate n of a window always draws from the same stream no matter which
/// worker produces it or in what order.
class SeedStream {
 public:
  explicit constexpr SeedStream(std::uint64_t root) : root_(root) {}

  constexpr std::uint64_t root() const { return root_; }

  constexpr CounterRng substream(std::string_view label, Index index) const {
    return CounterRng(derive(label, index));
  }

  /// A whole new seed tree, e.g. for the t-th rejection attempt.
  constexpr SeedStream child(std::string_view label, Index index) const {
    return SeedStream(mix64(derive(label, index) ^ 0x5851f42d4c957f2dULL));
  }

 private:
  constexpr std::uint64_t derive(std::string_view label, Index index) const {
    std::uint64_t k = mix64(root_ ^ hash_label(label));
    return mix64(k + kGoldenGamma * static_cast<std::uint64_t>(index));
  }

  std::uint64_t root_;
};

}  // namespace nsb
