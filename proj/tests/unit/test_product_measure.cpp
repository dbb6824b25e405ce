#include "nsb/product_measure.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "nsb/type_iii.hpp"

namespace nsb {
namespace {

// Reference values below come from tests/oracles/compute_oracles.py.

TEST(NuC, Marginals) {
  const auto m = make_nu_c(1.0 / 6);
  EXPECT_DOUBLE_EQ(m.mass(1, 0), 2.0 / 3);
  EXPECT_DOUBLE_EQ(m.mass(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(m.mass(-7, 1), 0.5);
  EXPECT_DOUBLE_EQ(make_nu_c(1.0).mass(1, 0), 0.5);  // 1/sqrt(1) is not < 1/2
  EXPECT_DOUBLE_EQ(make_nu_c(1.0).mass(5, 0), 0.5 + 1.0 / std::sqrt(5.0));
}

TEST(NuC, MarginalsSumToOne) {
  const auto m = make_nu_c(0.37);
  for (Index n = -50; n <= 5000; n += 7) {
    const auto v = m.marginal(n);
    EXPECT_GE(v[0], 0.0);
    EXPECT_GE(v[1], 0.0);
    EXPECT_NEAR(v[0] + v[1], 1.0, 1e-12);
  }
}

TEST(MuPC, ClampAndSubstitution) {
  const auto a = inverse_sqrt_sequence(0.5);
  EXPECT_DOUBLE_EQ(make_mu_pc(a, 1.0).mass(1, 0), 0.5);  // 1.5 leaves (0, 1)
  EXPECT_TRUE(a.clamped(1.0, 1));
  EXPECT_FALSE(a.clamped(1.0, 5));
  EXPECT_NEAR(make_mu_pc(a, 0.2).mass(4, 0), 0.6, 1e-15);
  const auto flat = make_mu_pc(zero_sequence(0.3), 0.8);
  for (Index n = -10; n <= 10; ++n) EXPECT_DOUBLE_EQ(flat.mass(n, 0), 0.3);
}

TEST(MuPC, NuCIsTheHalfCase) {
  // Two routes to the same marginals: the direct formula and the generic family.
  for (double c : {0.05, 1.0 / 6, 0.3, 0.49, 0.7, 2.0}) {
    const auto direct = make_nu_c(c);
    const auto generic = make_mu_pc(inverse_sqrt_sequence(0.5), c);
    for (Index n = -20; n <= 2000; ++n) {
      ASSERT_DOUBLE_EQ(direct.mass(n, 0), generic.mass(n, 0)) << "c=" << c << " n=" << n;
    }
  }
}

TEST(Doeblin, Values) {
  EXPECT_DOUBLE_EQ(doeblin_delta(make_iid({0.3, 0.7}), {-100, 100}).delta, 0.3);
  const auto r = doeblin_delta(make_nu_c(1.0 / 6), IndexRange::symmetric(1'000'000));
  EXPECT_NEAR(r.delta, 1.0 / 3, 1e-15);
  EXPECT_FALSE(r.zero_mass_index.has_value());
}

TEST(Doeblin, ZeroMassIsFlagged) {
  const auto m = FiniteProductMeasure::binary([](Index n) { return n == 4 ? 1.0 : 0.5; }, 0.0, "spike");
  const auto r = doeblin_delta(m, {0, 10});
  EXPECT_EQ(r.delta, 0.0);
  ASSERT_TRUE(r.zero_mass_index.has_value());
  EXPECT_EQ(*r.zero_mass_index, 4);
}

TEST(Doeblin, HintIsALowerBound) {
  const auto m = make_iid({0.2, 0.5, 0.3});
  const double delta = doeblin_delta(m, {-5, 5}).delta;
  EXPECT_GT(delta, m.doeblin_hint());
  for (Index n = -5; n <= 5; ++n) {
    for (Symbol s = 0; s < 3; ++s) EXPECT_GT(m.mass(n, s), m.doeblin_hint());
  }
}

TEST(Kakutani, ShiftSum) {
  EXPECT_EQ(kakutani_shift_sum(make_iid({0.3, 0.7}), 3, 1000), 0.0);
  EXPECT_EQ(kakutani_shift_sum(make_nu_c(0.1), 0, 1000), 0.0);
  EXPECT_NEAR(kakutani_shift_sum(make_nu_c(0.1), 1, 100'000), 0.011163742489553473, 1e-14);
}

TEST(Kakutani, DiagnosticTail) {
  const auto d = kakutani_shift_diagnostic(make_nu_c(0.1), 1, 100'000);
  EXPECT_GT(d.tail_increment, 0.0);
  EXPECT_LT(d.tail_increment, 1e-6 * d.value);
}

TEST(LogRN, Shift) {
  const auto w = bits_from_string("01101011100101001110", -2);
  EXPECT_NEAR(log_rn_shift(make_nu_c(1.0 / 6), 1, w), -0.44829991628374975, 1e-13);
  EXPECT_EQ(log_rn_shift(make_iid({0.3, 0.7}), 5, w), 0.0);
}

TEST(LogRN, ShiftSingleCoordinateOnFFamily) {
  // log(f_{n-k}(x) / f_n(x)) for one coordinate takes one of three values.
  const auto fam = TypeIIISpec::standard(0.25);
  const double ll = std::log(0.25);
  for (Index n = 2; n < 12; ++n) {
    for (double x : {0.001, 0.05, 0.5, 0.95, 0.999}) {
      const double v = std::log(f_density(fam, n - 1, x) / f_density(fam, n, x));
      EXPECT_TRUE(std::abs(v) < 1e-12 || std::abs(v - ll) < 1e-12 || std::abs(v + ll) < 1e-12) << v;
    }
  }
}

TEST(LogRN, ShiftZeroMassThrows) {
  const auto m = FiniteProductMeasure::binary([](Index n) { return n == 0 ? 1.0 : 0.5; }, 0.0, "spike");
  EXPECT_THROW(log_rn_shift(m, 1, bits_from_string("1", 0)), ZeroMassError);
}

TEST(LogRN, Swap) {
  const auto m = make_nu_c(0.3);
  EXPECT_EQ(log_rn_swap(m, 4, 4, 0, 1), 0.0);
  EXPECT_EQ(log_rn_swap(m, 2, 9, 1, 1), 0.0);
  const double v = log_rn_swap(m, 2, 9, 0, 1);
  const double expect = std::log(m.mass(2, 1) * m.mass(9, 0) / (m.mass(2, 0) * m.mass(9, 1)));
  EXPECT_NEAR(v, expect, 1e-14);
}

TEST(LogRN, SwapDensityFamily) {
  const auto spec = TypeIIISpec::standard(0.25);
  const auto fam = f_family(spec);
  // xi in A_2 but not A_5; xj in the middle where every f is 1.
  const double xi = 0.5 * (spec.a(5) + spec.a(2));
  EXPECT_NEAR(log_rn_swap(fam, 2, 5, xi, 0.5), std::log(4.0), 1e-12);
}

TEST(RPM, Example15AndEdges) {
  const double p = 0.3, q = 0.6;
  const auto seq = [](Index n) { return n >= 1 ? 0.1 / std::sqrt(static_cast<double>(n)) : 0.0; };
  const auto m = FiniteProductMeasure::binary([&](Index n) { return p + seq(n); }, 0.0, "base");
  const auto r = rpm(m, q, {p, 1 - p});
  for (Index n = -3; n < 50; ++n) EXPECT_NEAR(r.mass(n, 0), p + q * seq(n), 1e-15);
  const auto same = rpm(m, 1.0, {0.9, 0.1});
  const auto flat = rpm(m, 0.0, {0.9, 0.1});
  for (Index n = 0; n < 20; ++n) {
    EXPECT_DOUBLE_EQ(same.mass(n, 0), m.mass(n, 0));
    EXPECT_DOUBLE_EQ(flat.mass(n, 0), 0.9);
  }
}

TEST(RI, ForgettingTheCoinGivesRPM) {
  const auto m = make_nu_c(0.2);
  const std::vector<double> alpha{0.25, 0.75};
  const auto ins = ri(m, 0.4, alpha);
  const auto rp = rpm(m, 0.4, alpha);
  ASSERT_EQ(ins.alphabet_size(), 4u);
  EXPECT_EQ(ins.alphabet()[ri_symbol(1, true)], "1H");
  for (Index n = -5; n < 40; ++n) {
    double total = 0.0;
    for (Symbol s = 0; s < 4; ++s) total += ins.mass(n, s);
    EXPECT_NEAR(total, 1.0, 1e-15);
    for (Symbol a = 0; a < 2; ++a) {
      EXPECT_NEAR(ins.mass(n, ri_symbol(a, true)) + ins.mass(n, ri_symbol(a, false)), rp.mass(n, a), 1e-15);
    }
  }
  const auto heads = ri(m, 1.0, alpha);
  EXPECT_EQ(heads.mass(3, ri_symbol(0, false)), 0.0);
  EXPECT_DOUBLE_EQ(heads.mass(3, ri_symbol(0, true)), m.mass(3, 0));
}

TEST(PiecewiseDensity, IntegralMassInverse) {
  const PiecewiseDensity d{{0.0, 0.2, 0.5, 1.0}, {0.5, 0.0, 1.8}};
  EXPECT_NEAR(d.integral(), 1.0, 1e-15);
  EXPECT_NEAR(d.mass(0.1, 0.6), 0.05 + 0.18, 1e-15);
  EXPECT_DOUBLE_EQ(d(0.3), 0.0);
  EXPECT_DOUBLE_EQ(d(0.2), 0.0);  // right-continuous
  EXPECT_NEAR(d.inverse_cdf(0.05), 0.1, 1e-15);
  EXPECT_NEAR(d.inverse_cdf(0.1 + 0.45), 0.75, 1e-15);
  for (double t = 0.0; t < 1.0; t += 0.01) {
    const double u = d.inverse_cdf(t);
    EXPECT_GT(d(u), 0.0);
    EXPECT_NEAR(d.mass(0.0, u), t, 1e-12);
  }
}

TEST(DensityFamily, GenerationLogRatios) {
  const auto fam = f_family(TypeIIISpec::standard(0.25));
  const auto r = generation_log_ratios(fam, 5);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0], std::log(0.25), 1e-12);
  EXPECT_NEAR(r[1], 0.0, 1e-12);
  EXPECT_NEAR(r[2], -std::log(0.25), 1e-12);
  const auto shifted = shift_family(fam, -1.0);
  EXPECT_DOUBLE_EQ(shifted.support_lo(), -1.0);
  EXPECT_DOUBLE_EQ(shifted.density(5, -0.5), 1.0);
  EXPECT_NEAR(shifted.integral(7), 1.0, 1e-12);
}

TEST(Preconditions, Rejected) {
  EXPECT_THROW(make_nu_c(0.0), PreconditionError);
  EXPECT_THROW(make_iid({0.5, 0.6}), PreconditionError);
  EXPECT_THROW(rpm(make_nu_c(0.1), 1.5, {0.5, 0.5}), PreconditionError);
  EXPECT_THROW(rpm(make_nu_c(0.1), 0.5, {1.0}), PreconditionError);
}

}  // namespace
}  // namespace nsb
