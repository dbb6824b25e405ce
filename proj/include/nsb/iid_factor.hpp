#pragma once

// The marker-filler i.i.d. factor.
//
//   sample X -> decompose -> special fillers give fair bits (10 -> 1, 01 -> 0)
//   -> psi_split turns each fair bit (with its right context) into d+1 biased
//      bits -> every integer is matched to a special filler of capacity d and
//      receives one bit of that filler's tuple -> W.
//
// psi_split is a bounded-window code: tuple j is read off the `radius` fair
// bits j, j+1, ..., j+radius-1, whitened by a fixed bijection of the 64-bit
// word, then arithmetic-decoded into d+1 bits of law beta. It is deterministic
// and commutes with shifts of the fair-bit index.

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "nsb/marker_filler.hpp"
#include "nsb/matching.hpp"
#include "nsb/product_measure.hpp"
#include "nsb/rng.hpp"
#include "nsb/stats.hpp"
#include "nsb/window.hpp"

namespace nsb {

struct FairBitStream {
  std::vector<Index> positions;  // special-filler initial indices, increasing
  std::vector<int> bits;
  std::size_t size() const { return bits.size(); }
};

struct SplitCodeSpec {
  int d = 1;           // capacity; tuples carry d + 1 bits
  double beta0 = 0.5;  // P(output bit = 0)
  int radius = 64;     // fair bits consumed per tuple, 1..64

  /// beta0 solving (d + 1) H(beta0) = log 2.
  static SplitCodeSpec for_capacity(int d, int radius = 64);
  void validate() const;
  int width() const { return d + 1; }
};

/// Packed (d+1)-bit tuples, one per fair bit; the last radius-1 are censored.
class CodedTuples {
 public:
  CodedTuples() = default;
  CodedTuples(std::size_t count, int width);

  std::size_t size() const { return censored_.size(); }
  int width() const { return width_; }
  bool censored(std::size_t j) const { return censored_[j] != 0; }
  int bit(std::size_t j, int i) const {
    const std::size_t w = j * words_ + static_cast<std::size_t>(i) / 64;
    return static_cast<int>((words_data_[w] >> (static_cast<unsigned>(i) % 64)) & 1u);
  }

  void set_bit(std::size_t j, int i, int v);
  void set_censored(std::size_t j, bool c) { censored_[j] = c ? 1 : 0; }

 private:
  int width_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> words_data_;
  std::vector<std::uint8_t> censored_;
};

/// Factor output: W on the input window, with positions whose bit could not
/// be resolved inside the window flagged.
struct FactorOutput {
  SymbolWindow w;
  std::vector<std::uint8_t> censored;
  double censor_fraction() const;
};

double bias_square_sum(const FiniteProductMeasure& m, Index N);
SeriesDiagnostic bias_square_diagnostic(const FiniteProductMeasure& m, Index N);

FairBitStream extract_fair_bits(const SymbolWindow& w);
FairBitStream extract_fair_bits(const MarkerDecomposition& d);

/// Same stream as extract_fair_bits(sample_window(m, range, seeds)), sampled
/// chunk by chunk so long ranges need only O(chunk + output) memory. A special
/// filler is the local pattern 011 xy 011, so chunks overlap by 7 symbols.
FairBitStream sample_fair_bits(const FiniteProductMeasure& m, IndexRange range, const SeedStream& seeds,
                               Index chunk = Index{1} << 20);

/// Binary entropy in nats.
double binary_entropy(double beta);
/// Unique beta in (0, 1/2] with H(beta) = log(2) / dplus1, by bisection.
double beta_for(int dplus1);

CodedTuples psi_split(const FairBitStream& z, const SplitCodeSpec& spec, const SeedStream& seeds);

/// Assignment must come from matching the special-filler sequence of the same
/// window with capacity tuples.width() - 1.
FactorOutput spread_bits(const MarkerDecomposition& d, const MatchingAssignment& a,
                         const CodedTuples& tuples);

struct FactorDiagnostics {
  double q = 0.0;
  int d = 0;
  double beta0 = 0.0;
  double censor_fraction = 0.0;
  std::int64_t fair_bits = 0;
  std::int64_t interior_bits = 0;
  std::vector<stats::TestResult> tests;           // uniformity suite on W
  std::vector<stats::TestResult> fair_bit_tests;  // Z, reported alongside
  bool all_pass() const;
};

struct FactorRun {
  SymbolWindow input;
  FactorOutput output;
  FactorDiagnostics diagnostics;
};

struct FactorOptions {
  int code_radius = 64;
  double alpha = 0.001;        // significance for chi-square tests
  double z_max = 4.0;          // frequency-test band, in sigmas
  double max_correlation = 0.01;
  std::size_t max_lag = 8;
};

/// The full pipeline. Throws PreconditionError if the measure has a zero mass
/// on the range or the good-block bound q is not positive.
FactorRun run_iid_factor(const FiniteProductMeasure& m, IndexRange range, const SeedStream& seeds,
                         const FactorOptions& options = {});

/// Runs the statistical suite on the interior two-thirds of W.
std::vector<stats::TestResult> uniformity_suite(const FactorOutput& out, double beta0,
                                                const FactorOptions& options);
/// Chi-square against a fair coin and serial correlations of Z. The
/// correlation band is max(max_correlation, 4 / sqrt(n)): below about 1.6e5
/// bits a fixed 0.01 band is narrower than the sampling noise.
std::vector<stats::TestResult> fair_bit_suite(const FairBitStream& z, const FactorOptions& options);

nlohmann::json to_json(const FactorDiagnostics& d);

}  // namespace nsb
