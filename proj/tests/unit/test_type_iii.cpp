#include "nsb/type_iii.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "nsb/sampling.hpp"
#include "nsb/stats.hpp"

namespace nsb {
namespace {

constexpr double kLambda = 0.25;
constexpr double kLambdaPrime = 0.5;

bool near_any(double x, std::initializer_list<double> targets, double tol) {
  for (double t : targets) {
    if (std::abs(x - t) < tol) return true;
  }
  return false;
}

bool in_log_lattice(double x, double step, double tol) {
  const double k = std::round(x / step);
  return std::abs(x - k * step) < tol;
}

TEST(FDensity, Normalized) {
  const auto spec = TypeIIISpec::standard(kLambda);
  for (Index n = -3; n <= 200; ++n) EXPECT_NEAR(f_pieces(spec, n).integral(), 1.0, 1e-15) << n;
  for (Index n = -3; n <= 50; ++n) EXPECT_EQ(f_density(spec, n, 0.5), 1.0);
  for (double u : {0.001, 0.5, 0.999}) EXPECT_EQ(f_density(spec, 1, u), 1.0);
  EXPECT_EQ(f_density(spec, 2, 0.001), kLambda);
  EXPECT_EQ(f_density(spec, 2, 0.999), 1.0 / kLambda);
  EXPECT_NO_THROW(spec.validate(10000));
  EXPECT_THROW(TypeIIISpec::standard(1.0), PreconditionError);
}

TEST(FDensity, IntervalConditions) {
  const auto spec = TypeIIISpec::standard(kLambda);
  for (Index n = 2; n < 5000; ++n) {
    const double an = spec.a(n), an1 = spec.a(n + 1);
    ASSERT_LT(an, 1.0 - kLambda * an);        // A_n and B_n disjoint
    ASSERT_LE(an1, an);                       // A_{n+1} inside A_n
    ASSERT_GE(1.0 - kLambda * an1, 1.0 - kLambda * an);  // B_{n+1} inside B_n
  }
}

TEST(HMap, Setup) {
  const auto hm = make_hmap(TypeIIISpec::standard(kLambda), kLambdaPrime);
  EXPECT_DOUBLE_EQ(hm.h.p, 0.5);
  EXPECT_NEAR((hm.h.lambda + hm.h.p) / (1 + hm.h.p), kLambdaPrime, 1e-12);
  EXPECT_EQ(hm.family.first_active, 1);
  EXPECT_DOUBLE_EQ(hm.h.a1, TypeIIISpec::standard(kLambda).a(2));
  EXPECT_LT(hm.h.a1 * (1 + hm.h.p), 0.5);
  EXPECT_THROW(make_hmap(TypeIIISpec::standard(kLambda), 0.2), PreconditionError);
  // A large p pushes the head down the sequence.
  const auto big = make_hmap(TypeIIISpec::standard(0.05), 0.95);
  EXPECT_LT(big.h.a1 * (1 + big.h.p), 0.5);
  EXPECT_GT(big.h.p, 10.0);
}

TEST(HMap, Apply) {
  const auto h = make_hmap(TypeIIISpec::standard(kLambda), kLambdaPrime).h;
  const double a = h.a1, p = h.p;
  EXPECT_EQ(h_apply(h, 0.5), 0.5);
  EXPECT_EQ(h_apply(h, a / 2), a / 2);
  EXPECT_NEAR(h_apply(h, a + p * a / 2), a / 2, 1e-15);
  EXPECT_NEAR(h_apply(h, std::nextafter(a + p * a, 0.0)), a, 1e-12);
  const double top = 1 - kLambda * a;
  EXPECT_NEAR(h_apply(h, std::nextafter(top - p * a, 1.0)), 1.0, 1e-12);
  EXPECT_NEAR(h_apply(h, std::nextafter(top, 0.0)), top, 1e-12);
  EXPECT_EQ(h_apply(h, a), a);  // breakpoint convention
  const auto br = h_branches(h);
  ASSERT_EQ(br.size(), 5u);
  for (std::size_t i = 1; i < br.size(); ++i) EXPECT_EQ(br[i].lo, br[i - 1].hi);
}

TEST(Pushforward, MatchesListing) {
  const auto hm = make_hmap(TypeIIISpec::standard(kLambda), kLambdaPrime);
  const auto& spec = hm.family;
  const auto& h = hm.h;
  for (Index n : {-2, 0, 1, 2, 5, 40, 1000}) {
    const auto g = g_listing(spec, h, n);
    EXPECT_NEAR(g.integral(), 1.0, 1e-15) << n;
    for (std::size_t i = 0; i + 1 < g.breaks.size(); ++i) {
      const double lo = g.breaks[i], hi = g.breaks[i + 1];
      if (!(hi > lo)) continue;  // a_1 piece is empty at n = 1
      for (double t : {0.001, 0.3, 0.5, 0.77, 0.999}) {
        const double v = lo + t * (hi - lo);
        ASSERT_NEAR(pushforward_density(spec, h, n, v), g.values[i], 1e-12) << "n=" << n << " v=" << v;
      }
    }
  }
  const double an = spec.a(4);
  EXPECT_NEAR(pushforward_density(spec, h, 4, an / 2), kLambda + h.p, 1e-12);
  EXPECT_EQ(pushforward_density(spec, h, 4, h.a1 * (1 + h.p / 2)), 0.0);
}

TEST(Pushforward, MonteCarlo) {
  const auto hm = make_hmap(TypeIIISpec::standard(kLambda), kLambdaPrime);
  const Index n = 3;
  auto xs = sample_generation(f_family(hm.family), n, 400'000, SeedStream(31));
  for (double& x : xs) x = h_apply(hm.h, x);
  for (const auto& b : histogram_against(xs, g_listing(hm.family, hm.h, n), 3)) {
    if (b.expected == 0.0) {
      EXPECT_EQ(b.observed, 0) << b.lo;
    } else {
      EXPECT_LT(std::abs(b.z), 4.0) << b.lo << " " << b.z;
    }
  }
}

TEST(Ratio, Cases) {
  const auto hm = make_hmap(TypeIIISpec::standard(kLambda), kLambdaPrime);
  const auto& spec = hm.family;
  const auto& h = hm.h;
  const Index n = 6;
  EXPECT_NEAR(ratio_profile(spec, h, n, spec.a(n) / 2), 1.0, 1e-12);
  EXPECT_NEAR(ratio_profile(spec, h, n, 0.5 * (spec.a(n) + spec.a(n - 1))), kLambdaPrime, 1e-12);
  const double v = 1 - kLambda * 0.5 * (spec.a(n) + spec.a(n - 1));
  EXPECT_NEAR(ratio_profile(spec, h, n, v), 1 / kLambdaPrime, 1e-12);
  EXPECT_THROW(ratio_profile(spec, h, n, h.a1 * (1 + h.p / 2)), PreconditionError);
  EXPECT_THROW(ratio_profile(spec, h, n, spec.a(n)), PreconditionError);
}

TEST(Ratio, RandomMembership) {
  const auto hm = make_hmap(TypeIIISpec::standard(kLambda), kLambdaPrime);
  auto rng = SeedStream(12).substream("ratio", 0);
  int checked = 0;
  while (checked < 10000) {
    const Index n = static_cast<Index>(rng() % 60) - 5;
    const double v = rng.uniform();
    double r = 0.0;
    try {
      r = ratio_profile(hm.family, hm.h, n, v);
    } catch (const PreconditionError&) {
      continue;
    }
    ASSERT_TRUE(near_any(r, {kLambdaPrime, 1.0, 1 / kLambdaPrime}, 1e-9)) << n << " " << v << " " << r;
    ++checked;
  }
}

TEST(Ratio, SwapQuantization) {
  const auto fam = f_family(TypeIIISpec::standard(kLambda));
  auto rng = SeedStream(13).substream("swap", 0);
  const double step = std::log(kLambda);
  for (int t = 0; t < 10000; ++t) {
    const Index i = static_cast<Index>(rng() % 40) - 5, j = static_cast<Index>(rng() % 40) - 5;
    const double xi = rng.uniform(), xj = rng.uniform();
    ASSERT_TRUE(in_log_lattice(log_rn_swap(fam, i, j, xi, xj), step, 1e-9));
  }
}

DensityFamily negative_family(double lambda) { return shift_family(f_family(TypeIIISpec::standard(lambda)), -1.0); }

TEST(Mix, MassesAndRatios) {
  const double L = 0.3;
  const auto mix = mix_disjoint(f_family(TypeIIISpec::standard(kLambda)), negative_family(L));
  EXPECT_EQ(mix.support_lo(), -1.0);
  EXPECT_EQ(mix.support_hi(), 1.0);
  for (Index n = -2; n < 30; ++n) {
    const auto pc = mix.pieces(n);
    EXPECT_NEAR(pc.mass(-1.0, 0.0), 0.5, 1e-15);
    EXPECT_NEAR(pc.integral(), 1.0, 1e-15);
    for (double r : generation_log_ratios(mix, n)) {
      bool ok = false;
      for (int j = -1; j <= 1 && !ok; ++j) {
        for (int jp = -1; jp <= 1 && !ok; ++jp) ok = std::abs(r - j * std::log(kLambda) - jp * std::log(L)) < 1e-12;
      }
      EXPECT_TRUE(ok) << r;
    }
  }
  EXPECT_THROW(mix_disjoint(f_family(TypeIIISpec::standard(kLambda)), f_family(TypeIIISpec::standard(L))),
               PreconditionError);
}

TEST(Erase, NoNegativesUnchanged) {
  RealWindow w;
  w.values = {0.1, 0.5, 0.9};
  const auto e = erase_negative_side(w, negative_safe_zone(TypeIIISpec::standard(0.3)), 0.8, SeedStream(1));
  EXPECT_EQ(e.w.values, w.values);
  EXPECT_EQ(e.replaced, 0);
}

TEST(Erase, UniformNegativeSide) {
  const double L = 0.3;
  const auto neg_spec = TypeIIISpec::standard(L);
  const auto mix = mix_disjoint(f_family(TypeIIISpec::standard(kLambda)), negative_family(L));
  const auto w = sample_density_window(mix, {-100000, 100000}, SeedStream(40));
  const auto zone = negative_safe_zone(neg_spec);
  const double a2 = neg_spec.a(2);
  EXPECT_NEAR(zone.lo, -1 + a2, 1e-15);
  EXPECT_NEAR(zone.hi, -L * a2, 1e-15);
  const double safe = zone.hi - zone.lo;
  const auto e = erase_negative_side(w, zone, safe, SeedStream(41));
  EXPECT_EQ(e.capacity, static_cast<int>(std::ceil(8 / safe - 1e-9)));
  std::vector<double> replaced;
  const std::size_t lo = w.values.size() / 6, hi = w.values.size() - lo;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    if (w.values[i] >= 0.0) {
      ASSERT_EQ(e.w.values[i], w.values[i]);
      continue;
    }
    ASSERT_GE(e.w.values[i], -1.0);
    ASSERT_LT(e.w.values[i], 0.0);
    if (i >= lo && i < hi) {
      ASSERT_FALSE(e.censored[i]);
      replaced.push_back(e.w.values[i]);
    }
  }
  const auto ks = stats::ks_test("erase", replaced, [](double x) { return x + 1.0; }, 0.001);
  EXPECT_TRUE(ks.pass) << ks.statistic;
  // Deterministic.
  EXPECT_EQ(erase_negative_side(w, zone, safe, SeedStream(41)).w.values, e.w.values);
}

TEST(Lift, NegativeSidePushforward) {
  const auto hm = make_hmap(TypeIIISpec::standard(kLambda), kLambdaPrime);
  const Index n = 2;
  RealWindow w;
  w.values = sample_generation(shift_family(f_family(hm.family), -1.0), n, 300'000, SeedStream(50));
  w.values.push_back(0.25);
  const auto out = lift_lambda_on_negative(w, hm.h);
  EXPECT_EQ(out.values.back(), 0.25);
  std::vector<double> shifted(out.values.begin(), out.values.end() - 1);
  for (double& x : shifted) x += 1.0;
  for (const auto& b : histogram_against(shifted, g_listing(hm.family, hm.h, n), 2)) {
    if (b.expected == 0.0) {
      EXPECT_EQ(b.observed, 0);
    } else {
      EXPECT_LT(std::abs(b.z), 4.0) << b.lo;
    }
  }
  // Log-ratio set of the lifted family sits on the lambda' lattice.
  const auto g = g_family(hm.family, hm.h);
  for (Index m = -1; m < 30; ++m) {
    for (double r : generation_log_ratios(g, m)) EXPECT_TRUE(in_log_lattice(r, std::log(kLambdaPrime), 1e-9)) << r;
  }
}

TEST(Commensurable, Flags) {
  EXPECT_TRUE(logs_commensurable(0.25, 0.5));
  EXPECT_TRUE(logs_commensurable(0.125, 0.25));
  EXPECT_FALSE(logs_commensurable(0.25, 0.3));
}

}  // namespace
}  // namespace nsb
