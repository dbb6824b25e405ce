#pragma once

// d-equivariant Meshalkin matching of b's to a's.
//
// Rounds: every surviving b whose next survivor is a surviving a is matched to
// it; matched b's and a's holding d partners are removed; repeat until a round
// matches nothing. A b's partner is determined by the letters at and to the
// right of it, so inside a finite window every b is either matched exactly as
// it would be on the bi-infinite sequence or censored at the right edge.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nsb/rng.hpp"
#include "nsb/types.hpp"
#include "nsb/window.hpp"

namespace nsb {

enum class Letter : std::uint8_t { a, b };

struct ABSequence {
  Index start = 0;
  std::vector<Letter> letters;

  static ABSequence from_string(const std::string& s, Index start = 0);
  std::string to_string() const;

  Index size() const { return static_cast<Index>(letters.size()); }
  Index end() const { return start + size() - 1; }
  Letter at(Index n) const { return letters.at(static_cast<std::size_t>(n - start)); }
  Index count(Letter l) const;
};

struct MatchPair {
  Index b = 0;
  Index a = 0;
  int round = 0;
  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct MatchingAssignment {
  Index start = 0;
  int capacity = 0;
  std::vector<MatchPair> pairs;      // sorted by b
  std::vector<int> multiplicity;     // per window position; nonzero only at a's
  std::vector<Index> unmatched;      // censored b's, ascending
  int rounds = 0;

  std::optional<Index> partner(Index b) const;
  int multiplicity_of(Index a) const {
    return multiplicity.at(static_cast<std::size_t>(a - start));
  }
  /// Partners of every a in ascending order, indexed by window position.
  std::vector<std::vector<Index>> partners_by_a() const;
};

/// Least integer >= 8(1 + (1-q)/q) = 8/q.
int required_d(double q);

MatchingAssignment meshalkin_match(const ABSequence& z, int d);

/// First k >= 1 with W_m + ... + W_{m+k} >= 0 where W = -1 on b and d on a;
/// nullopt when the window ends first.
std::optional<Index> matching_radius(const ABSequence& z, int d, Index m);

/// z[i] == a implies z2[i] == a for every i.
bool dominates(const ABSequence& z, const ABSequence& z2);

/// Monotone coupling: each b of z becomes a with probability
/// (q_prime - q) / (1 - q), independently, so the result dominates z.
ABSequence monotone_coupling(const ABSequence& z, double q, double q_prime, const SeedStream& seeds);

/// (Z', Z): Z' has an a at every uncensored special-filler initial index;
/// Z has an a at 8n + 3 whenever 8n + [0, 7] is a good block.
std::pair<ABSequence, ABSequence> good_to_ab(const SymbolWindow& w);

/// Rows (b_index, a_index, round).
void write_assignment_csv(std::ostream& os, const MatchingAssignment& m);
/// Rows (k, count) over the uncensored radii of all b's.
void write_radius_histogram_csv(std::ostream& os, const ABSequence& z, int d);
std::vector<std::pair<Index, std::int64_t>> radius_histogram(const ABSequence& z, int d);

}  // namespace nsb
