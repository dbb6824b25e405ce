#pragma once

// Piecewise-constant density families with quantized ratio sets, the
// piecewise-linear map h that turns a lambda-family into a lambda'-family, and
// the mixing / erasing steps used to combine two such families on [-1, 1].

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nsb/matching.hpp"
#include "nsb/product_measure.hpp"
#include "nsb/rng.hpp"
#include "nsb/window.hpp"

namespace nsb {

/// f_n = lambda on A_n = (0, a_n), 1/lambda on B_n = (1 - lambda a_n, 1), 1
/// elsewhere; f_n == 1 for n < first_active.
struct TypeIIISpec {
  double lambda = 0.5;
  std::function<double(Index)> a;
  Index first_active = 2;

  /// a_n = 1 / ((n + 4) log(n + 4)), active from n = 2.
  static TypeIIISpec standard(double lambda);
  /// New a_n = old a_{n + shift}, keeping the same inactive prefix length
  /// shifted accordingly.
  TypeIIISpec reindexed(Index shift) const;

  bool active(Index n) const { return n >= first_active; }
  /// Checks A_n, B_n disjoint and nested for first_active <= n <= last.
  void validate(Index last) const;
};

struct HMapSpec {
  double lambda = 0.25;
  double lambda_prime = 0.5;
  double p = 0.5;
  double a1 = 0.0;
};

/// A family and its h-map, with the family reindexed so that its first
/// active index is 1 and a_1 (1 + p) < 1/2.
struct HMapSetup {
  TypeIIISpec family;
  HMapSpec h;
};

HMapSetup make_hmap(const TypeIIISpec& spec, double lambda_prime);

double f_density(const TypeIIISpec& spec, Index n, double u);
PiecewiseDensity f_pieces(const TypeIIISpec& spec, Index n);
DensityFamily f_family(const TypeIIISpec& spec);

/// Affine piece of h on an open interval: h(x) = slope * x + intercept.
struct Branch {
  double lo = 0.0;
  double hi = 0.0;
  double slope = 1.0;
  double intercept = 0.0;
};

/// All pieces of h in increasing order of domain, identity pieces included.
std::vector<Branch> h_branches(const HMapSpec& h);
double h_apply(const HMapSpec& h, double x);

/// Change of variables summed over every branch preimage u of v, with the
/// slope taken at u.
double pushforward_density(const TypeIIISpec& spec, const HMapSpec& h, Index n, double v);

/// Closed-form listing of g_n = density of h(U), U ~ f_n.
PiecewiseDensity g_listing(const TypeIIISpec& spec, const HMapSpec& h, Index n);
DensityFamily g_family(const TypeIIISpec& spec, const HMapSpec& h);

/// Open intervals on which every g_n vanishes are removed from [0, 1].
bool in_support(const HMapSpec& h, double v);

/// g_{n-1}(v) / g_n(v). Throws PreconditionError outside the support or
/// within 1e-12 of a breakpoint of either generation.
double ratio_profile(const TypeIIISpec& spec, const HMapSpec& h, Index n, double v);

/// Half of nu on its support below zero, half of rho on [0, 1].
DensityFamily mix_disjoint(const DensityFamily& rho, const DensityFamily& nu);

/// Closed interval of [-1, 0) on which every generation of the negative-side
/// family has the same constant density.
struct SafeZone {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// B = [0, 1] minus (A_n0 and B_n0) for the first active n0, shifted by -1.
SafeZone negative_safe_zone(const TypeIIISpec& negative_family);

struct ErasedWindow {
  RealWindow w;
  std::vector<std::uint8_t> censored;  // replaced-but-unresolved negative coordinates
  int capacity = 0;
  double safe_fraction = 0.0;          // P(safe | negative) used for the capacity
  std::int64_t replaced = 0;
};

/// Replaces every coordinate in [-1, 0) by a uniform [-1, 0) value that is a
/// function of the safe-zone values nearby. Coordinates in [0, 1] are copied.
ErasedWindow erase_negative_side(const RealWindow& w, const SafeZone& zone, double safe_fraction,
                                 const SeedStream& seeds);

/// Applies x -> h(x + 1) - 1 to coordinates in [-1, 0).
RealWindow lift_lambda_on_negative(const RealWindow& w, const HMapSpec& h);

/// True when log(x) / log(y) is within tol of a rational with denominator at
/// most max_den. Floating inputs cannot certify independence; this only flags
/// the obvious cases.
bool logs_commensurable(double x, double y, int max_den = 1000, double tol = 1e-9);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  double expected = 0.0;  // probability
  std::int64_t observed = 0;
  double z = 0.0;         // (observed - n p) / sqrt(n p (1 - p))
};

/// Histogram of `samples` against the exact cell probabilities of `density`,
/// with each piece of the density split into `per_piece` equal bins.
std::vector<HistogramBin> histogram_against(const std::vector<double>& samples,
                                            const PiecewiseDensity& density, int per_piece);

}  // namespace nsb
