#include "nsb/type_iii.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsb/kernels.hpp"

namespace nsb {

TypeIIISpec TypeIIISpec::standard(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw PreconditionError("TypeIIISpec: lambda must lie in (0, 1)");
  TypeIIISpec s;
  s.lambda = lambda;
  s.a = [](Index n) {
    const double m = static_cast<double>(n) + 4.0;
    return 1.0 / (m * std::log(m));
  };
  s.first_active = 2;
  return s;
}

TypeIIISpec TypeIIISpec::reindexed(Index shift) const {
  TypeIIISpec s = *this;
  s.a = [a = this->a, shift](Index n) { return a(n + shift); };
  s.first_active = first_active - shift;
  return s;
}

void TypeIIISpec::validate(Index last) const {
  if (!(lambda > 0.0 && lambda < 1.0)) throw PreconditionError("TypeIIISpec: lambda must lie in (0, 1)");
  double prev = 1.0;
  for (Index n = first_active; n <= last; ++n) {
    const double an = a(n);
    if (!(an > 0.0 && an <= prev)) throw PreconditionError("TypeIIISpec: a_n must be positive and nonincreasing");
    if (!(an < 1.0 - lambda * an)) throw PreconditionError("TypeIIISpec: A_n and B_n overlap");
    prev = an;
  }
}

HMapSetup make_hmap(const TypeIIISpec& spec, double lambda_prime) {
  const double lambda = spec.lambda;
  if (!(lambda > 0.0 && lambda < lambda_prime && lambda_prime < 1.0)) {
    throw PreconditionError("make_hmap: need 0 < lambda < lambda' < 1");
  }
  HMapSetup out;
  out.h.lambda = lambda;
  out.h.lambda_prime = lambda_prime;
  out.h.p = (lambda_prime - lambda) / (1.0 - lambda_prime);
  Index shift = spec.first_active - 1;
  while (spec.a(shift + 1) * (1.0 + out.h.p) >= 0.5) ++shift;
  out.family = spec.reindexed(shift);
  out.family.first_active = 1;
  out.h.a1 = out.family.a(1);
  // The two slanted pieces must sit between A_1 and B_1 without touching.
  const double a1 = out.h.a1, p = out.h.p;
  if (!(a1 + p * a1 < 1.0 - lambda * a1 - p * a1)) {
    throw PreconditionError("make_hmap: slanted pieces overlap");
  }
  return out;
}

double f_density(const TypeIIISpec& spec, Index n, double u) {
  if (!spec.active(n)) return 1.0;
  const double an = spec.a(n);
  if (u > 0.0 && u < an) return spec.lambda;
  if (u > 1.0 - spec.lambda * an && u < 1.0) return 1.0 / spec.lambda;
  return 1.0;
}

PiecewiseDensity f_pieces(const TypeIIISpec& spec, Index n) {
  if (!spec.active(n)) return {{0.0, 1.0}, {1.0}};
  const double an = spec.a(n), l = spec.lambda;
  return {{0.0, an, 1.0 - l * an, 1.0}, {l, 1.0, 1.0 / l}};
}

DensityFamily f_family(const TypeIIISpec& spec) {
  return DensityFamily(0.0, 1.0, [spec](Index n) { return f_pieces(spec, n); },
                       "f(lambda=" + std::to_string(spec.lambda) + ")");
}

std::vector<Branch> h_branches(const HMapSpec& h) {
  const double a = h.a1, p = h.p, l = h.lambda;
  const double top = 1.0 - l * a;
  return {
      {0.0, a, 1.0, 0.0},
      {a, a + p * a, 1.0 / p, -a / p},
      {a + p * a, top - p * a, 1.0, 0.0},
      {top - p * a, top, -l / p, top + l * top / p},
      {top, 1.0, 1.0, 0.0},
  };
}

double h_apply(const HMapSpec& h, double x) {
  for (const auto& b : h_branches(h)) {
    if (x > b.lo && x < b.hi) return b.slope * x + b.intercept;
  }
  return x;  // breakpoints
}

double pushforward_density(const TypeIIISpec& spec, const HMapSpec& h, Index n, double v) {
  double total = 0.0;
  for (const auto& b : h_branches(h)) {
    const double u = (v - b.intercept) / b.slope;
    if (u > b.lo && u < b.hi) total += f_density(spec, n, u) / std::abs(b.slope);
  }
  return total;
}

PiecewiseDensity g_listing(const TypeIIISpec& spec, const HMapSpec& h, Index n) {
  const double a1 = h.a1, p = h.p, l = h.lambda;
  const double top = 1.0 - l * a1;
  if (!spec.active(n)) {
    return {{0.0, a1, a1 + p * a1, top - p * a1, top, 1.0}, {1.0 + p, 0.0, 1.0, 0.0, 1.0 + p / l}};
  }
  const double an = spec.a(n);
  return {{0.0, an, a1, a1 + p * a1, top - p * a1, top, 1.0 - l * an, 1.0},
          {l + p, 1.0 + p, 0.0, 1.0, 0.0, 1.0 + p / l, (1.0 + p) / l}};
}

DensityFamily g_family(const TypeIIISpec& spec, const HMapSpec& h) {
  return DensityFamily(0.0, 1.0, [spec, h](Index n) { return g_listing(spec, h, n); },
                       "g(lambda=" + std::to_string(h.lambda) + ",lambda'=" + std::to_string(h.lambda_prime) + ")");
}

bool in_support(const HMapSpec& h, double v) {
  const double a = h.a1, p = h.p, top = 1.0 - h.lambda * h.a1;
  if (v < 0.0 || v > 1.0) return false;
  if (v > a && v < a + p * a) return false;
  if (v > top - p * a && v < top) return false;
  return true;
}

double ratio_profile(const TypeIIISpec& spec, const HMapSpec& h, Index n, double v) {
  if (!in_support(h, v)) throw PreconditionError("ratio_profile: point outside the support");
  const auto prev = g_listing(spec, h, n - 1);
  const auto cur = g_listing(spec, h, n);
  for (const auto* g : {&prev, &cur}) {
    for (double b : g->breaks) {
      if (std::abs(v - b) < 1e-12) throw PreconditionError("ratio_profile: point at a breakpoint");
    }
  }
  const double den = cur(v);
  if (!(den > 0.0)) throw PreconditionError("ratio_profile: zero density");
  return prev(v) / den;
}

DensityFamily mix_disjoint(const DensityFamily& rho, const DensityFamily& nu) {
  if (nu.support_hi() > rho.support_lo()) throw PreconditionError("mix_disjoint: supports overlap");
  auto gen = [rho, nu](Index n) {
    auto lower = nu.pieces(n);
    const auto upper = rho.pieces(n);
    PiecewiseDensity out;
    out.breaks = lower.breaks;
    for (double v : lower.values) out.values.push_back(0.5 * v);
    if (upper.breaks.front() > out.breaks.back()) {
      out.breaks.push_back(upper.breaks.front());
      out.values.push_back(0.0);
    }
    out.breaks.insert(out.breaks.end(), upper.breaks.begin() + 1, upper.breaks.end());
    for (double v : upper.values) out.values.push_back(0.5 * v);
    return out;
  };
  return DensityFamily(nu.support_lo(), rho.support_hi(), gen,
                       "mix(" + rho.description() + "," + nu.description() + ")");
}

SafeZone negative_safe_zone(const TypeIIISpec& negative_family) {
  const Index n0 = negative_family.first_active;
  const double a = negative_family.a(n0);
  return {-1.0 + a, -negative_family.lambda * a};
}

ErasedWindow erase_negative_side(const RealWindow& w, const SafeZone& zone, double safe_fraction,
                                 const SeedStream& seeds) {
  ErasedWindow out;
  out.w = w;
  out.w.source = "erase(" + w.source + ")";
  out.censored.assign(w.values.size(), 0);
  out.safe_fraction = safe_fraction;

  // The negative coordinates, in index order, form the AB sequence: a safe-zone
  // value is an a, any other negative value a b.
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    if (w.values[i] < 0.0) neg.push_back(i);
  }
  out.replaced = static_cast<std::int64_t>(neg.size());
  if (neg.empty()) return out;

  ABSequence z;
  z.letters.reserve(neg.size());
  for (std::size_t i : neg) z.letters.push_back(zone.contains(w.values[i]) ? Letter::a : Letter::b);
  out.capacity = required_d(safe_fraction);
  const auto match = meshalkin_match(z, out.capacity);
  const auto by_a = match.partners_by_a();

  auto key_rng = seeds.substream("erase", 0);
  const std::uint64_t seed_key = key_rng();
  const double width = zone.hi - zone.lo;
  auto uniform_from = [&](double safe_value, int slot) {
    const double t = std::clamp((safe_value - zone.lo) / width, 0.0, 1.0);
    const auto key = static_cast<std::uint64_t>(std::ldexp(t, 52));
    return to_unit(mix64(mix64(key ^ seed_key) + kGoldenGamma * static_cast<std::uint64_t>(slot + 1)));
  };

  for (std::size_t k = 0; k < neg.size(); ++k) {
    if (z.letters[k] == Letter::b) {
      if (!match.partner(static_cast<Index>(k))) out.censored[neg[k]] = 1;
      continue;
    }
    const double s = w.values[neg[k]];
    out.w.values[neg[k]] = -1.0 + uniform_from(s, 0);
    int slot = 1;
    for (Index b : by_a[k]) out.w.values[neg[static_cast<std::size_t>(b)]] = -1.0 + uniform_from(s, slot++);
  }
  return out;
}

RealWindow lift_lambda_on_negative(const RealWindow& w, const HMapSpec& h) {
  RealWindow out = w;
  out.source = "lift(" + w.source + ")";
  for (double& x : out.values) {
    if (x < 0.0 && x >= -1.0) x = h_apply(h, x + 1.0) - 1.0;
  }
  return out;
}

bool logs_commensurable(double x, double y, int max_den, double tol) {
  const double lx = std::log(x), ly = std::log(y);
  if (ly == 0.0 || lx == 0.0) return true;
  const double r = lx / ly;
  for (int q = 1; q <= max_den; ++q) {
    if (std::abs(r * q - std::round(r * q)) < tol * q) return true;
  }
  return false;
}

std::vector<HistogramBin> histogram_against(const std::vector<double>& samples,
                                            const PiecewiseDensity& density, int per_piece) {
  std::vector<HistogramBin> bins;
  const double total = density.integral();
  for (std::size_t i = 0; i < density.values.size(); ++i) {
    const double lo = density.breaks[i], hi = density.breaks[i + 1];
    if (!(hi > lo)) continue;
    for (int k = 0; k < per_piece; ++k) {
      HistogramBin b;
      b.lo = lo + (hi - lo) * k / per_piece;
      b.hi = k + 1 == per_piece ? hi : lo + (hi - lo) * (k + 1) / per_piece;
      b.expected = density.values[i] * (b.hi - b.lo) / total;
      bins.push_back(b);
    }
  }
  std::vector<double> edges;
  for (const auto& b : bins) edges.push_back(b.lo);
  for (double x : samples) {
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    if (it == edges.begin()) continue;
    auto& b = bins[static_cast<std::size_t>(it - edges.begin()) - 1];
    if (x <= b.hi) b.observed += 1;
  }
  const auto n = static_cast<double>(samples.size());
  for (auto& b : bins) {
    const double mean = n * b.expected;
    const double sd = std::sqrt(n * b.expected * (1.0 - b.expected));
    if (sd > 0.0) {
      b.z = (static_cast<double>(b.observed) - mean) / sd;
    } else {
      b.z = b.observed == 0 ? 0.0 : INFINITY;
    }
  }
  return bins;
}

}  // namespace nsb
