#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace nsb::stats {

struct TestResult {
  std::string name;
  double statistic = 0.0;
  double p_value = 1.0;
  bool pass = false;
};

nlohmann::json to_json(const TestResult& t);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double dof);
/// Two-sided normal tail P(|Z| >= |z|).
double normal_two_sided(double z);
/// Asymptotic Kolmogorov tail with the Stephens small-sample correction.
double kolmogorov_sf(double d, std::int64_t n);

/// Pearson chi-square of observed counts against expected counts. Cells with
/// expected count below `min_expected` are pooled (smallest first) before the
/// statistic is formed.
TestResult chi_square(std::string name, std::span<const double> observed,
                      std::span<const double> expected, double alpha, double min_expected = 5.0);

/// One-sample KS against a continuous CDF.
TestResult ks_test(std::string name, std::vector<double> sample,
                   const std::function<double(double)>& cdf, double alpha);

/// Count of successes against a binomial target: |z| <= z_max.
TestResult frequency_test(std::string name, std::int64_t successes, std::int64_t trials, double p,
                          double z_max);

/// Lag-`lag` sample autocorrelation of a 0/1 (or real) sequence.
double serial_correlation(std::span<const double> x, std::size_t lag);

/// Serial correlations at lags 1..max_lag, each passing iff |r| < bound.
std::vector<TestResult> serial_correlation_tests(std::string prefix, std::span<const double> x,
                                                 std::size_t max_lag, double bound);

/// Chi-square of non-overlapping `width`-blocks of a bit sequence against
/// i.i.d. bits with P(1) = p1.
TestResult block_chi_square(std::string name, std::span<const double> bits, int width, double p1,
                            double alpha);

}  // namespace nsb::stats
