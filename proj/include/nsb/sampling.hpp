#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nsb/product_measure.hpp"
#include "nsb/rng.hpp"
#include "nsb/window.hpp"

namespace nsb {

inline constexpr std::int64_t kDefaultRejectionBudget = 1'000'000;

/// Raised when the conditioned-filler sampler runs out of attempts.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::int64_t attempts, std::int64_t accepted)
      : Error("rejection budget exceeded after " + std::to_string(attempts) + " attempts"),
        attempts_(attempts),
        accepted_(accepted) {}
  std::int64_t attempts() const { return attempts_; }
  double acceptance_rate() const {
    return attempts_ ? static_cast<double>(accepted_) / static_cast<double>(attempts_) : 0.0;
  }

 private:
  std::int64_t attempts_;
  std::int64_t accepted_;
};

/// Coordinate n is drawn by inverse CDF from the stream ("x", n); output is
/// independent of thread count and of the order coordinates are visited.
SymbolWindow sample_window(const FiniteProductMeasure& m, IndexRange range, const SeedStream& seeds);

/// Exact inverse CDF over the piecewise-constant density at each index.
RealWindow sample_density_window(const DensityFamily& d, IndexRange range, const SeedStream& seeds);

/// `count` independent draws from the single generation n of a density family.
std::vector<double> sample_generation(const DensityFamily& d, Index n, std::int64_t count,
                                      const SeedStream& seeds);

/// Product law on the range conditioned on 011 not appearing, by rejection.
SymbolWindow sample_conditioned_filler(const FiniteProductMeasure& m, IndexRange range,
                                       const SeedStream& seeds,
                                       std::int64_t budget = kDefaultRejectionBudget);

bool contains_marker(std::span<const Symbol> bits);

/// Draw a symbol from a marginal by inverse CDF.
Symbol draw_symbol(const FiniteProductMeasure& m, Index n, double u);

void write_window_csv(std::ostream& os, const SymbolWindow& w);
void write_window_csv(std::ostream& os, const RealWindow& w);

namespace serial {
SymbolWindow sample_window(const FiniteProductMeasure& m, IndexRange range, const SeedStream& seeds);
RealWindow sample_density_window(const DensityFamily& d, IndexRange range, const SeedStream& seeds);
}  // namespace serial

}  // namespace nsb
