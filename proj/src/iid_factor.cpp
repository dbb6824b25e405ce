#include "nsb/iid_factor.hpp"

#include <algorithm>
#include <cmath>

#include "nsb/kernels.hpp"
#include "nsb/sampling.hpp"

namespace nsb {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

}  // namespace

SplitCodeSpec SplitCodeSpec::for_capacity(int d, int radius) {
  SplitCodeSpec s;
  s.d = d;
  s.beta0 = beta_for(d + 1);
  s.radius = radius;
  s.validate();
  return s;
}

void SplitCodeSpec::validate() const {
  if (d < 0) throw PreconditionError("SplitCodeSpec: negative capacity");
  if (!(beta0 > 0.0 && beta0 <= 0.5)) throw PreconditionError("SplitCodeSpec: beta0 outside (0, 1/2]");
  if (radius < 1 || radius > 64) throw PreconditionError("SplitCodeSpec: radius must be in 1..64");
  if (std::abs((d + 1) * binary_entropy(beta0) - kLog2) > 1e-10) {
    throw PreconditionError("SplitCodeSpec: entropy balance (d+1) H(beta0) = log 2 violated");
  }
}

CodedTuples::CodedTuples(std::size_t count, int width)
    : width_(width),
      words_((static_cast<std::size_t>(width) + 63) / 64),
      words_data_(count * words_, 0),
      censored_(count, 0) {}

void CodedTuples::set_bit(std::size_t j, int i, int v) {
  const std::size_t w = j * words_ + static_cast<std::size_t>(i) / 64;
  const std::uint64_t mask = std::uint64_t{1} << (static_cast<unsigned>(i) % 64);
  if (v) {
    words_data_[w] |= mask;
  } else {
    words_data_[w] &= ~mask;
  }
}

double FactorOutput::censor_fraction() const {
  if (censored.empty()) return 0.0;
  const auto c = std::count(censored.begin(), censored.end(), std::uint8_t{1});
  return static_cast<double>(c) / static_cast<double>(censored.size());
}

namespace {

double bias_term(const FiniteProductMeasure& m, Index i) {
  const double r01 = m.mass(i, 0) * m.mass(i + 1, 1);
  const double r10 = m.mass(i, 1) * m.mass(i + 1, 0);
  const double den = r01 + r10;
  if (!(den > 0.0)) return std::nan("");
  const double t = r01 / den - 0.5;
  return t * t;
}

}  // namespace

double bias_square_sum(const FiniteProductMeasure& m, Index N) {
  if (!m.is_binary()) throw PreconditionError("bias_square_sum: measure must be two-symbol");
  if (N < 0) throw PreconditionError("bias_square_sum: N must be nonnegative");
  const double s = kernels::sum(-N, N, [&](Index i) { return bias_term(m, i); });
  if (std::isnan(s)) throw ZeroMassError("bias_square_sum: zero denominator", 0);
  return s;
}

SeriesDiagnostic bias_square_diagnostic(const FiniteProductMeasure& m, Index N) {
  SeriesDiagnostic d;
  d.value = bias_square_sum(m, N);
  d.tail_increment = d.value - bias_square_sum(m, N / 10);
  return d;
}

FairBitStream extract_fair_bits(const MarkerDecomposition& d) {
  FairBitStream z;
  z.positions.reserve(d.special.size());
  z.bits.reserve(d.special.size());
  for (const auto& s : d.special) {
    z.positions.push_back(s.initial);
    z.bits.push_back(s.bit);
  }
  return z;
}

FairBitStream extract_fair_bits(const SymbolWindow& w) { return extract_fair_bits(decompose(w)); }

FairBitStream sample_fair_bits(const FiniteProductMeasure& m, IndexRange range, const SeedStream& seeds,
                               Index chunk) {
  if (chunk < 8) throw PreconditionError("sample_fair_bits: chunk must be at least 8");
  FairBitStream z;
  for (Index s = range.lo; s <= range.hi; s += chunk) {
    const Index own_hi = std::min(range.hi, s + chunk - 1);
    const Index hi = std::min(range.hi, own_hi + 7);
    const auto w = sample_window(m, {s, hi}, seeds);
    for (const auto& f : decompose(w).special) {
      if (f.initial - 3 > own_hi) break;
      if (f.initial - 3 < s) continue;
      z.positions.push_back(f.initial);
      z.bits.push_back(f.bit);
    }
  }
  return z;
}

double binary_entropy(double beta) {
  if (beta <= 0.0 || beta >= 1.0) return 0.0;
  return -beta * std::log(beta) - (1.0 - beta) * std::log1p(-beta);
}

double beta_for(int dplus1) {
  if (dplus1 < 1) throw PreconditionError("beta_for: dplus1 must be at least 1");
  if (dplus1 == 1) return 0.5;
  const double target = kLog2 / dplus1;
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 0.0) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (binary_entropy(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CodedTuples psi_split(const FairBitStream& z, const SplitCodeSpec& spec, const SeedStream& seeds) {
  spec.validate();
  const std::size_t n = z.size();
  const int width = spec.width();
  const auto radius = static_cast<std::size_t>(spec.radius);
  CodedTuples out(n, width);
  auto key_rng = seeds.substream("psi", 0);
  const std::uint64_t key = key_rng();
  const double beta = spec.beta0;

  kernels::for_each(0, static_cast<Index>(n) - 1, [&](Index jj) {
    const auto j = static_cast<std::size_t>(jj);
    if (j + radius > n) {
      out.set_censored(j, true);
      return;
    }
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < radius; ++i) {
      word |= static_cast<std::uint64_t>(z.bits[j + i] & 1) << i;
    }
    double u = to_unit(mix64(word ^ key));
    for (int i = 0; i < width; ++i) {
      if (u < beta) {
        out.set_bit(j, i, 0);
        u /= beta;
      } else {
        out.set_bit(j, i, 1);
        u = (u - beta) / (1.0 - beta);
      }
      u = std::clamp(u, 0.0, std::nextafter(1.0, 0.0));
    }
  });
  return out;
}

FactorOutput spread_bits(const MarkerDecomposition& d, const MatchingAssignment& a,
                         const CodedTuples& tuples) {
  const Index start = d.start;
  const Index size = d.end - d.start + 1;
  if (a.start != start || static_cast<Index>(a.multiplicity.size()) != size) {
    throw PreconditionError("spread_bits: assignment does not cover the decomposed window");
  }
  if (tuples.size() != d.special.size()) {
    throw PreconditionError("spread_bits: one tuple per special filler required");
  }
  if (a.capacity > tuples.width() - 1) {
    throw PreconditionError("spread_bits: capacity exceeds tuple width - 1");
  }
  FactorOutput out;
  out.w.start = start;
  out.w.values.assign(static_cast<std::size_t>(size), 0);
  out.w.source = "iid_factor";
  out.censored.assign(static_cast<std::size_t>(size), 1);

  std::vector<Index> tuple_of(static_cast<std::size_t>(size), -1);
  for (std::size_t j = 0; j < d.special.size(); ++j) {
    tuple_of[static_cast<std::size_t>(d.special[j].initial - start)] = static_cast<Index>(j);
  }
  auto give = [&](Index pos, Index j, int slot) {
    const auto p = static_cast<std::size_t>(pos - start);
    if (tuples.censored(static_cast<std::size_t>(j))) return;
    out.w.values[p] = tuples.bit(static_cast<std::size_t>(j), slot);
    out.censored[p] = 0;
  };

  for (std::size_t j = 0; j < d.special.size(); ++j) give(d.special[j].initial, static_cast<Index>(j), 0);
  const auto by_a = a.partners_by_a();
  for (std::size_t p = 0; p < by_a.size(); ++p) {
    if (by_a[p].empty()) continue;
    const Index j = tuple_of[p];
    if (j < 0) throw PreconditionError("spread_bits: partner is not a special-filler initial");
    if (static_cast<int>(by_a[p].size()) > tuples.width() - 1) {
      throw Error("spread_bits: tuple exhausted");
    }
    int slot = 1;
    for (Index b : by_a[p]) give(b, j, slot++);
  }
  return out;
}

bool FactorDiagnostics::all_pass() const {
  return std::all_of(tests.begin(), tests.end(), [](const auto& t) { return t.pass; });
}

std::vector<stats::TestResult> uniformity_suite(const FactorOutput& out, double beta0,
                                                const FactorOptions& options) {
  const std::size_t n = out.w.values.size();
  const std::size_t lo = n / 6, hi = n - n / 6;
  std::vector<double> bits;
  bits.reserve(hi - lo);
  std::int64_t ones = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    if (out.censored[i]) continue;
    bits.push_back(out.w.values[i]);
    ones += out.w.values[i];
  }
  const double p1 = 1.0 - beta0;
  std::vector<stats::TestResult> tests;
  tests.push_back(stats::frequency_test("W_frequency", ones, static_cast<std::int64_t>(bits.size()), p1,
                                        options.z_max));
  tests.push_back(stats::block_chi_square("W_block3", bits, 3, p1, options.alpha));
  for (auto& t : stats::serial_correlation_tests("W_serial", bits, options.max_lag, options.max_correlation)) {
    tests.push_back(std::move(t));
  }
  return tests;
}

std::vector<stats::TestResult> fair_bit_suite(const FairBitStream& z, const FactorOptions& options) {
  std::vector<double> bits(z.bits.begin(), z.bits.end());
  double ones = 0.0;
  for (double b : bits) ones += b;
  const double n = static_cast<double>(bits.size());
  const std::vector<double> obs{n - ones, ones}, exp{n / 2, n / 2};
  std::vector<stats::TestResult> tests;
  tests.push_back(stats::chi_square("Z_fair", obs, exp, options.alpha));
  const double band = std::max(options.max_correlation, n > 0 ? 4.0 / std::sqrt(n) : 1.0);
  for (auto& t : stats::serial_correlation_tests("Z_serial", bits, options.max_lag, band)) {
    tests.push_back(std::move(t));
  }
  return tests;
}

FactorRun run_iid_factor(const FiniteProductMeasure& m, IndexRange range, const SeedStream& seeds,
                         const FactorOptions& options) {
  if (!m.is_binary()) throw PreconditionError("run_iid_factor: measure must be two-symbol");
  if (range.empty()) throw PreconditionError("run_iid_factor: empty range");
  const auto doeblin = doeblin_delta(m, range);
  if (doeblin.zero_mass_index) {
    throw PreconditionError("run_iid_factor: zero mass at index " + std::to_string(*doeblin.zero_mass_index));
  }
  const double q = good_prob_lower_bound(m, range);
  if (!(q > 0.0)) throw PreconditionError("run_iid_factor: good-block probability bound is zero");

  FactorRun run;
  run.input = sample_window(m, range, seeds.child("input", 0));
  const auto dec = decompose(run.input);
  const int d = required_d(q);
  const auto [zprime, z] = good_to_ab(run.input);
  const auto assignment = meshalkin_match(zprime, d);
  const auto fair = extract_fair_bits(dec);
  const auto spec = SplitCodeSpec::for_capacity(d, options.code_radius);
  const auto tuples = psi_split(fair, spec, seeds.child("psi", 0));
  run.output = spread_bits(dec, assignment, tuples);

  auto& diag = run.diagnostics;
  diag.q = q;
  diag.d = d;
  diag.beta0 = spec.beta0;
  diag.censor_fraction = run.output.censor_fraction();
  diag.fair_bits = static_cast<std::int64_t>(fair.size());
  diag.fair_bit_tests = fair_bit_suite(fair, options);
  diag.tests = uniformity_suite(run.output, spec.beta0, options);
  const std::size_t n = run.output.censored.size();
  for (std::size_t i = n / 6; i < n - n / 6; ++i) diag.interior_bits += run.output.censored[i] ? 0 : 1;
  return run;
}

nlohmann::json to_json(const FactorDiagnostics& d) {
  nlohmann::json tests = nlohmann::json::array();
  for (const auto& t : d.tests) tests.push_back(stats::to_json(t));
  nlohmann::json fair = nlohmann::json::array();
  for (const auto& t : d.fair_bit_tests) fair.push_back(stats::to_json(t));
  return {{"q", d.q},
          {"d", d.d},
          {"beta0", d.beta0},
          {"censor_fraction", d.censor_fraction},
          {"fair_bits", d.fair_bits},
          {"interior_bits", d.interior_bits},
          {"tests", tests},
          {"fair_bit_tests", fair}};
}

}  // namespace nsb
