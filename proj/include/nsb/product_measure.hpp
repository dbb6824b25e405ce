#pragma once

// Product measures on sequence spaces indexed by Z.
//
// Marginal families are lazy functions of the index; nothing infinite is
// stored and every sum over Z takes its truncation range explicitly.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsb/types.hpp"
#include "nsb/window.hpp"

namespace nsb {

/// n -> probability vector on a finite alphabet.
class FiniteProductMeasure {
 public:
  using MassFn = std::function<double(Index, Symbol)>;

  FiniteProductMeasure(std::vector<std::string> alphabet, MassFn mass, double doeblin_hint,
                       std::string description);

  /// Two-symbol measure {0, 1} given by n -> mass of 0.
  static FiniteProductMeasure binary(std::function<double(Index)> mass0, double doeblin_hint,
                                     std::string description);

  std::size_t alphabet_size() const { return alphabet_.size(); }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  bool is_binary() const { return alphabet_.size() == 2; }

  double mass(Index n, Symbol s) const { return mass_(n, s); }
  std::vector<double> marginal(Index n) const;

  /// Strict lower bound on all masses supplied at construction; 0 if unknown.
  double doeblin_hint() const { return doeblin_hint_; }
  const std::string& description() const { return description_; }

 private:
  std::vector<std::string> alphabet_;
  MassFn mass_;
  double doeblin_hint_;
  std::string description_;
};

/// p together with a perturbation sequence a_n: mu_n(0) = p + c a_n, except
/// where that leaves the open interval (0, 1), where mu_n(0) = p.
struct SequenceSpec {
  double p = 0.5;
  std::function<double(Index)> a;
  std::string name;

  /// p + c a_n, or p when p + c a_n is not in the open interval (0, 1).
  double perturbed_mass(double c, Index n) const;
  bool clamped(double c, Index n) const;
};

/// a_n = 1/sqrt(n) for n >= 1, 0 otherwise.
SequenceSpec inverse_sqrt_sequence(double p);
/// a_n = 0 for all n.
SequenceSpec zero_sequence(double p);

FiniteProductMeasure make_iid(std::vector<double> probabilities);
FiniteProductMeasure make_nu_c(double c);
FiniteProductMeasure make_mu_pc(const SequenceSpec& spec, double c);

struct DoeblinResult {
  double delta = 0.0;
  std::optional<Index> zero_mass_index;  // first offending index, if any
};

DoeblinResult doeblin_delta(const FiniteProductMeasure& m, IndexRange range);

/// A sum over |n| <= N reported with the increment over its last decade,
/// value(N) - value(N / 10), so convergence can be audited.
struct SeriesDiagnostic {
  double value = 0.0;
  double tail_increment = 0.0;
};

double kakutani_shift_sum(const FiniteProductMeasure& m, Index k, Index N);
SeriesDiagnostic kakutani_shift_diagnostic(const FiniteProductMeasure& m, Index k, Index N);

/// sum over the window of log(m_{n-k}(x_n) / m_n(x_n)).
double log_rn_shift(const FiniteProductMeasure& m, Index k, const Window<Symbol>& w);

/// Log Radon-Nikodym derivative of the transposition (i j) at a point whose
/// i-th and j-th coordinates are xi and xj.
double log_rn_swap(const FiniteProductMeasure& m, Index i, Index j, Symbol xi, Symbol xj);

FiniteProductMeasure rpm(const FiniteProductMeasure& m, double p, std::vector<double> alpha);

/// Random insertion. The product alphabet is ordered (a, H), (a, T) for each
/// symbol a, i.e. symbol 2a is (a, H) and 2a + 1 is (a, T).
FiniteProductMeasure ri(const FiniteProductMeasure& m, double p, std::vector<double> alpha);
inline Symbol ri_symbol(Symbol a, bool heads) { return 2 * a + (heads ? 0 : 1); }

// ---------------------------------------------------------------------------
// Densities

/// Piecewise-constant density: values[i] on [breaks[i], breaks[i+1]).
struct PiecewiseDensity {
  std::vector<double> breaks;
  std::vector<double> values;

  double operator()(double u) const;
  double integral() const;
  /// Mass of [lo, hi] by exact piecewise integration.
  double mass(double lo, double hi) const;
  /// Exact inverse CDF; t in [0, 1).
  double inverse_cdf(double t) const;
};

/// n -> piecewise-constant probability density on a fixed interval.
class DensityFamily {
 public:
  using GenerationFn = std::function<PiecewiseDensity(Index)>;

  DensityFamily(double lo, double hi, GenerationFn generation, std::string description);

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  const std::string& description() const { return description_; }

  PiecewiseDensity pieces(Index n) const { return generation_(n); }
  double density(Index n, double u) const;
  std::vector<double> breakpoints(Index n) const { return generation_(n).breaks; }
  double integral(Index n) const { return generation_(n).integral(); }

 private:
  double lo_;
  double hi_;
  GenerationFn generation_;
  std::string description_;
};

double log_rn_swap(const DensityFamily& m, Index i, Index j, double xi, double xj);

/// Distinct values of log(m_{n-1}(v) / m_n(v)) over the common refinement of
/// the two generations' pieces, skipping pieces where either density is zero.
std::vector<double> generation_log_ratios(const DensityFamily& m, Index n);

/// Same family translated by `offset`.
DensityFamily shift_family(const DensityFamily& m, double offset);

}  // namespace nsb
