#include "nsb/sampling.hpp"

#include <charconv>
#include <ostream>

#include "nsb/kernels.hpp"

namespace nsb {

namespace {

constexpr std::string_view kCoordinateLabel = "x";

std::string shortest(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class Fill>
SymbolWindow make_symbol_window(const FiniteProductMeasure& m, IndexRange range,
                                const SeedStream& seeds, Fill&& fill) {
  SymbolWindow w;
  w.start = range.lo;
  w.values.assign(static_cast<std::size_t>(range.size()), 0);
  w.seed = seeds.root();
  w.source = m.description();
  fill(w);
  return w;
}

}  // namespace

Symbol draw_symbol(const FiniteProductMeasure& m, Index n, double u) {
  const auto k = static_cast<Symbol>(m.alphabet_size());
  double cum = 0.0;
  for (Symbol s = 0; s < k - 1; ++s) {
    cum += m.mass(n, s);
    if (u < cum) return s;
  }
  return k - 1;
}

SymbolWindow sample_window(const FiniteProductMeasure& m, IndexRange range, const SeedStream& seeds) {
  return make_symbol_window(m, range, seeds, [&](SymbolWindow& w) {
    kernels::for_each(range.lo, range.hi, [&](Index n) {
      auto rng = seeds.substream(kCoordinateLabel, n);
      w.values[static_cast<std::size_t>(n - range.lo)] = draw_symbol(m, n, rng.uniform());
    });
  });
}

SymbolWindow serial::sample_window(const FiniteProductMeasure& m, IndexRange range,
                                   const SeedStream& seeds) {
  return make_symbol_window(m, range, seeds, [&](SymbolWindow& w) {
    kernels::serial::for_each(range.lo, range.hi, [&](Index n) {
      auto rng = seeds.substream(kCoordinateLabel, n);
      w.values[static_cast<std::size_t>(n - range.lo)] = draw_symbol(m, n, rng.uniform());
    });
  });
}

namespace {

template <class ForEach>
RealWindow density_window(const DensityFamily& d, IndexRange range, const SeedStream& seeds,
                          ForEach&& for_each) {
  RealWindow w;
  w.start = range.lo;
  w.values.assign(static_cast<std::size_t>(range.size()), 0.0);
  w.seed = seeds.root();
  w.source = d.description();
  for_each(range.lo, range.hi, [&](Index n) {
    auto rng = seeds.substream(kCoordinateLabel, n);
    w.values[static_cast<std::size_t>(n - range.lo)] = d.pieces(n).inverse_cdf(rng.uniform());
  });
  return w;
}

}  // namespace

RealWindow sample_density_window(const DensityFamily& d, IndexRange range, const SeedStream& seeds) {
  return density_window(d, range, seeds,
                        [](Index lo, Index hi, auto&& f) { kernels::for_each(lo, hi, f); });
}

RealWindow serial::sample_density_window(const DensityFamily& d, IndexRange range,
                                         const SeedStream& seeds) {
  return density_window(d, range, seeds,
                        [](Index lo, Index hi, auto&& f) { kernels::serial::for_each(lo, hi, f); });
}

std::vector<double> sample_generation(const DensityFamily& d, Index n, std::int64_t count,
                                      const SeedStream& seeds) {
  const auto pieces = d.pieces(n);
  std::vector<double> out(static_cast<std::size_t>(count));
  kernels::for_each(0, count - 1, [&](Index i) {
    auto rng = seeds.substream("draw", i);
    out[static_cast<std::size_t>(i)] = pieces.inverse_cdf(rng.uniform());
  });
  return out;
}

bool contains_marker(std::span<const Symbol> bits) {
  for (std::size_t i = 0; i + 2 < bits.size(); ++i) {
    if (bits[i] == 0 && bits[i + 1] == 1 && bits[i + 2] == 1) return true;
  }
  return false;
}

SymbolWindow sample_conditioned_filler(const FiniteProductMeasure& m, IndexRange range,
                                       const SeedStream& seeds, std::int64_t budget) {
  if (!m.is_binary()) throw PreconditionError("sample_conditioned_filler: two-symbol alphabet required");
  for (std::int64_t attempt = 0; attempt < budget; ++attempt) {
    const SeedStream trial = seeds.child("filler", attempt);
    SymbolWindow w;
    w.start = range.lo;
    w.seed = seeds.root();
    w.source = "filler(" + m.description() + ")";
    w.values.reserve(static_cast<std::size_t>(range.size()));
    for (Index n = range.lo; n <= range.hi; ++n) {
      auto rng = trial.substream(kCoordinateLabel, n);
      w.values.push_back(draw_symbol(m, n, rng.uniform()));
    }
    if (!contains_marker(w.values)) return w;
  }
  throw BudgetExceeded(budget, 0);
}

void write_window_csv(std::ostream& os, const SymbolWindow& w) {
  os << "index,value\n";
  for (Index n = w.start; n <= w.end(); ++n) os << n << ',' << w.at(n) << '\n';
}

void write_window_csv(std::ostream& os, const RealWindow& w) {
  os << "index,value\n";
  for (Index n = w.start; n <= w.end(); ++n) os << n << ',' << shortest(w.at(n)) << '\n';
}

}  // namespace nsb
