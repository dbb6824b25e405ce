#pragma once

// Speedups and products of Bernoulli shifts as block shifts, the Kakutani
// block sums that compare them, and the Hellinger sums behind the
// conservative/dissipative classification of nu^c and its products.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsb/product_measure.hpp"
#include "nsb/window.hpp"

namespace nsb {

/// Blocks n = start, ..., each of width k, stored flat.
struct BlockedWindow {
  Index start = 0;
  int k = 1;
  std::vector<Symbol> symbols;

  Index count() const { return static_cast<Index>(symbols.size()) / k; }
  Symbol at(Index n, int i) const {
    return symbols.at(static_cast<std::size_t>((n - start) * k + i));
  }
  /// Block n as a base-`alphabet` integer, first symbol most significant.
  std::size_t code(Index n, std::size_t alphabet) const;
};

/// Block n = (x_kn, ..., x_kn+k-1) for every n whose block lies in the window.
BlockedWindow zeta(const SymbolWindow& w, int k);
SymbolWindow unblock(const BlockedWindow& b);

/// Block n = (x^1_n, ..., x^k_n).
BlockedWindow pi_interleave(const std::vector<SymbolWindow>& ws);
std::vector<SymbolWindow> de_interleave(const BlockedWindow& b);

/// Indexed by block code (first symbol most significant).
std::vector<double> eta_marginal(const FiniteProductMeasure& m, int k, Index n);
std::vector<double> kappa_marginal(const FiniteProductMeasure& m, int k, Index n);

/// Marginal of coordinate n of gamma[k]: mass of 0 is the clamped p + c a_kn.
std::vector<double> gamma_marginal(const SequenceSpec& spec, double c, int k, Index n);
FiniteProductMeasure gamma_measure(const SequenceSpec& spec, double c, int k);

struct BlockKakutaniRow {
  Index n = 0;
  double alpha = 0.0;  // sum over blocks of (eta_n - kappa_n)^2
  double bound = 0.0;  // k^2 sum_l (m_{kn+l-1}(0) - m_{kn}(0))^2
};

struct BlockKakutani {
  double sum = 0.0;
  double bound = 0.0;
  std::vector<BlockKakutaniRow> rows;  // only when requested
  Index violations = 0;                // n with alpha > bound (1e-15 slack)
};

/// Binary measures, 1 <= k <= 20.
BlockKakutani block_kakutani_sum(const FiniteProductMeasure& m, int k, Index N, bool keep_rows = false);

/// a_n(c) = c / sqrt(n) when n >= 1 and c / sqrt(n) < 1/2, else 0.
double nu_bias(double c, Index n);

/// sum over |n| <= N of (a_{n-k}(c) - a_n(c))^2.
double hellinger_S(double c, Index k, Index N);
/// The same sum over all of Z: direct to k + 2000 (or further for large c),
/// then an Euler-Maclaurin tail with the integral in closed form.
double hellinger_S_total(double c, Index k);

struct Dissipativity {
  double c = 0.0;
  Index K = 0;
  std::vector<double> S;        // S[k-1] = hellinger_S_total(c, k)
  std::vector<double> partial;  // partial[k-1] = sum_{j <= k} exp(-S(j, c)/2)
  double slope = 0.0;           // least squares of -S/2 against log k on [K/10, K]
  double increment_last_decade() const;
};

Dissipativity dissipativity_partial(double c, Index K);

struct ScalingIdentityReport {
  Index N = 0;
  double rpm_base_max_error = 0.0;  // |rpm(m, q, (p,1-p))_n(0) - (p + q a_n)|
  double first_max_error = 0.0;      // mu^(p,d) vs RPM(mu^(p,c), d/c, (p,1-p)), off clamps
  double second_max_error = 0.0;     // mu^(p,pc/q) vs RPM(mu^(q,c), p/q, (0,1)), off clamps
  std::vector<Index> first_mismatch;
  std::vector<Index> second_mismatch;
};

/// Coordinatewise check for |n| <= N with a_n = 1/sqrt(n).
ScalingIdentityReport rpm_scaling_identity(double p, double q, double c, double dsmall, Index N);

struct IndexRow {
  int k = 0;
  double c_eff = 0.0;  // c sqrt(k)
  std::string classification;
  double S = 0.0;        // hellinger_S_total(c_eff, K)
  double partial = 0.0;  // dissipativity partial sum up to K at c_eff
};

struct IndexReport {
  double c = 0.0;
  double D = 0.0;
  int kmax = 0;
  Index K = 0;
  int index = 0;            // largest k <= kmax with c sqrt(k) < D
  bool saturated = false;   // every k <= kmax classified conservative
  std::vector<IndexRow> rows;
};

/// Proxy classification: conservative iff c sqrt(k) < D. Equality is reported
/// as critical and counts as not conservative.
IndexReport index_report(double c, double D, int kmax, Index K = 1000);

nlohmann::json to_json(const IndexReport& r);
nlohmann::json to_json(const ScalingIdentityReport& r);

}  // namespace nsb
