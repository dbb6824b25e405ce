#include "nsb/matching.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nsb/marker_filler.hpp"

namespace nsb {

ABSequence ABSequence::from_string(const std::string& s, Index start) {
  ABSequence z;
  z.start = start;
  z.letters.reserve(s.size());
  for (char c : s) {
    if (c == 'a') {
      z.letters.push_back(Letter::a);
    } else if (c == 'b') {
      z.letters.push_back(Letter::b);
    } else {
      throw PreconditionError("ABSequence: letters must be 'a' or 'b'");
    }
  }
  return z;
}

std::string ABSequence::to_string() const {
  std::string s;
  s.reserve(letters.size());
  for (Letter l : letters) s.push_back(l == Letter::a ? 'a' : 'b');
  return s;
}

Index ABSequence::count(Letter l) const {
  return static_cast<Index>(std::count(letters.begin(), letters.end(), l));
}

std::optional<Index> MatchingAssignment::partner(Index b) const {
  auto it = std::lower_bound(pairs.begin(), pairs.end(), b,
                             [](const MatchPair& p, Index v) { return p.b < v; });
  if (it == pairs.end() || it->b != b) return std::nullopt;
  return it->a;
}

std::vector<std::vector<Index>> MatchingAssignment::partners_by_a() const {
  std::vector<std::vector<Index>> out(multiplicity.size());
  for (const auto& p : pairs) out[static_cast<std::size_t>(p.a - start)].push_back(p.b);
  return out;  // pairs are sorted by b, so each list is ascending
}

int required_d(double q) {
  if (!(q > 0.0)) throw PreconditionError("required_d: q must be positive");
  // 8 (1 + (1-q)/q) simplifies to 8/q; the slack absorbs rounding in 8/q.
  return static_cast<int>(std::ceil(8.0 / q - 1e-9));
}

MatchingAssignment meshalkin_match(const ABSequence& z, int d) {
  if (d < 1) throw PreconditionError("meshalkin_match: capacity must be positive");
  const Index n = z.size();
  const auto N = static_cast<std::size_t>(n);
  auto is_a = [&](Index i) { return z.letters[static_cast<std::size_t>(i)] == Letter::a; };

  std::vector<Index> prev(N), next(N);
  for (Index i = 0; i < n; ++i) {
    prev[static_cast<std::size_t>(i)] = i - 1;
    next[static_cast<std::size_t>(i)] = i + 1;
  }
  std::vector<std::uint8_t> alive(N, 1);
  std::vector<int> mult(N, 0);
  std::vector<Index> partner(N, -1);
  std::vector<int> round_of(N, 0);

  auto unlink = [&](Index i) {
    const auto u = static_cast<std::size_t>(i);
    alive[u] = 0;
    const Index p = prev[u], q = next[u];
    if (p >= 0) next[static_cast<std::size_t>(p)] = q;
    if (q < n) prev[static_cast<std::size_t>(q)] = p;
  };
  auto is_candidate = [&](Index i) {
    if (i < 0 || !alive[static_cast<std::size_t>(i)] || is_a(i)) return false;
    const Index q = next[static_cast<std::size_t>(i)];
    return q < n && is_a(q);
  };

  std::vector<Index> cand;
  for (Index i = 0; i + 1 < n; ++i) {
    if (is_candidate(i)) cand.push_back(i);
  }

  int round = 0;
  std::vector<Index> removed;
  while (!cand.empty() && round < n) {
    ++round;
    removed.clear();
    // Matches are decided from the state at the start of the round; each a has
    // a unique predecessor, so it gains at most one partner per round.
    for (Index b : cand) {
      const Index a = next[static_cast<std::size_t>(b)];
      partner[static_cast<std::size_t>(b)] = a;
      round_of[static_cast<std::size_t>(b)] = round;
      mult[static_cast<std::size_t>(a)] += 1;
    }
    for (Index b : cand) {
      const Index a = next[static_cast<std::size_t>(b)];
      unlink(b);
      removed.push_back(b);
      if (mult[static_cast<std::size_t>(a)] == d && alive[static_cast<std::size_t>(a)]) {
        unlink(a);
        removed.push_back(a);
      }
    }
    // Only survivors left of a removal can have gained a new right neighbour.
    std::vector<Index> next_cand;
    for (Index r : removed) {
      Index p = prev[static_cast<std::size_t>(r)];
      while (p >= 0 && !alive[static_cast<std::size_t>(p)]) p = prev[static_cast<std::size_t>(p)];
      if (is_candidate(p)) next_cand.push_back(p);
    }
    std::sort(next_cand.begin(), next_cand.end());
    next_cand.erase(std::unique(next_cand.begin(), next_cand.end()), next_cand.end());
    cand.swap(next_cand);
  }

  MatchingAssignment out;
  out.start = z.start;
  out.capacity = d;
  out.rounds = round;
  out.multiplicity = std::move(mult);
  for (Index i = 0; i < n; ++i) {
    if (is_a(i)) continue;
    const Index a = partner[static_cast<std::size_t>(i)];
    if (a >= 0) {
      out.pairs.push_back({z.start + i, z.start + a, round_of[static_cast<std::size_t>(i)]});
    } else {
      out.unmatched.push_back(z.start + i);
    }
  }
  return out;
}

std::optional<Index> matching_radius(const ABSequence& z, int d, Index m) {
  if (m < z.start || m > z.end() || z.at(m) != Letter::b) {
    throw PreconditionError("matching_radius: index is not a b");
  }
  Index sum = -1;
  for (Index k = 1; m + k <= z.end(); ++k) {
    sum += z.at(m + k) == Letter::a ? d : -1;
    if (sum >= 0) return k;
  }
  return std::nullopt;
}

std::vector<std::pair<Index, std::int64_t>> radius_histogram(const ABSequence& z, int d) {
  // R at local position m is (first j > m with P[j] >= P[m]) - m - 1, where P
  // is the prefix sum of the walk; a next-greater-or-equal sweep finds all of
  // them in linear time.
  const Index n = z.size();
  std::vector<Index> P(static_cast<std::size_t>(n + 1), 0);
  for (Index i = 0; i < n; ++i) {
    P[static_cast<std::size_t>(i + 1)] =
        P[static_cast<std::size_t>(i)] + (z.letters[static_cast<std::size_t>(i)] == Letter::a ? d : -1);
  }
  std::vector<Index> nge(static_cast<std::size_t>(n + 1), -1);
  std::vector<Index> stack;
  for (Index j = n; j >= 0; --j) {
    const Index v = P[static_cast<std::size_t>(j)];
    while (!stack.empty() && P[static_cast<std::size_t>(stack.back())] < v) stack.pop_back();
    if (!stack.empty()) nge[static_cast<std::size_t>(j)] = stack.back();
    stack.push_back(j);
  }
  std::vector<std::int64_t> counts;
  for (Index m = 0; m < n; ++m) {
    if (z.letters[static_cast<std::size_t>(m)] != Letter::b) continue;
    const Index j = nge[static_cast<std::size_t>(m)];
    if (j < 0) continue;
    const auto r = static_cast<std::size_t>(j - m - 1);
    if (counts.size() <= r) counts.resize(r + 1, 0);
    counts[r] += 1;
  }
  std::vector<std::pair<Index, std::int64_t>> out;
  for (std::size_t k = 1; k < counts.size(); ++k) {
    if (counts[k]) out.emplace_back(static_cast<Index>(k), counts[k]);
  }
  return out;
}

bool dominates(const ABSequence& z, const ABSequence& z2) {
  if (z.start != z2.start || z.size() != z2.size()) {
    throw PreconditionError("dominates: index ranges differ");
  }
  for (std::size_t i = 0; i < z.letters.size(); ++i) {
    if (z.letters[i] == Letter::a && z2.letters[i] != Letter::a) return false;
  }
  return true;
}

ABSequence monotone_coupling(const ABSequence& z, double q, double q_prime, const SeedStream& seeds) {
  if (!(q >= 0.0 && q < 1.0 && q_prime >= q && q_prime <= 1.0)) {
    throw PreconditionError("monotone_coupling: need 0 <= q <= q' <= 1, q < 1");
  }
  const double flip = (q_prime - q) / (1.0 - q);
  ABSequence out = z;
  for (Index n = z.start; n <= z.end(); ++n) {
    auto& l = out.letters[static_cast<std::size_t>(n - z.start)];
    if (l == Letter::b && seeds.substream("flip", n).uniform() < flip) l = Letter::a;
  }
  return out;
}

std::pair<ABSequence, ABSequence> good_to_ab(const SymbolWindow& w) {
  ABSequence zprime, z;
  zprime.start = z.start = w.start;
  zprime.letters.assign(w.values.size(), Letter::b);
  z.letters.assign(w.values.size(), Letter::b);
  const auto d = decompose(w);
  for (const auto& s : d.special) zprime.letters[static_cast<std::size_t>(s.initial - w.start)] = Letter::a;
  for (Index s : good_intervals(w, 0)) z.letters[static_cast<std::size_t>(s + 3 - w.start)] = Letter::a;
  return {std::move(zprime), std::move(z)};
}

void write_assignment_csv(std::ostream& os, const MatchingAssignment& m) {
  os << "b_index,a_index,round\n";
  for (const auto& p : m.pairs) os << p.b << ',' << p.a << ',' << p.round << '\n';
}

void write_radius_histogram_csv(std::ostream& os, const ABSequence& z, int d) {
  os << "k,count\n";
  for (const auto& [k, c] : radius_histogram(z, d)) os << k << ',' << c << '\n';
}

}  // namespace nsb
