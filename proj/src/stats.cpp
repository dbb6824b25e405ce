#include "nsb/stats.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "nsb/types.hpp"

namespace nsb::stats {

nlohmann::json to_json(const TestResult& t) {
  return {{"name", t.name}, {"statistic", t.statistic}, {"p_value", t.p_value}, {"pass", t.pass}};
}

double chi_square_sf(double x, double dof) {
  if (dof <= 0) return 1.0;
  if (x <= 0) return 1.0;
  boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::cdf(boost::math::complement(dist, x));
}

double normal_two_sided(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

double kolmogorov_sf(double d, std::int64_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0, sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult chi_square(std::string name, std::span<const double> observed,
                      std::span<const double> expected, double alpha, double min_expected) {
  if (observed.size() != expected.size()) throw PreconditionError("chi_square: size mismatch");
  std::vector<std::size_t> order(observed.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return expected[a] < expected[b]; });

  // Pool from the smallest expected count upward until each cell reaches
  // min_expected; a short remainder joins the last complete cell.
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double pool_o = 0.0, pool_e = 0.0;
  for (std::size_t i : order) {
    pool_o += observed[i];
    pool_e += expected[i];
    if (pool_e >= min_expected) {
      cells.emplace_back(pool_o, pool_e);
      pool_o = pool_e = 0.0;
    }
  }
  if (pool_e > 0.0 || pool_o > 0.0) {
    if (cells.empty()) {
      cells.emplace_back(pool_o, pool_e);
    } else {
      cells.back().first += pool_o;
      cells.back().second += pool_e;
    }
  }

  TestResult r;
  r.name = std::move(name);
  for (const auto& [o, e] : cells) {
    if (e > 0.0) {
      r.statistic += (o - e) * (o - e) / e;
    } else if (o > 0.0) {
      r.statistic = std::numeric_limits<double>::infinity();
    }
  }
  const double dof = static_cast<double>(cells.size()) - 1.0;
  r.p_value = std::isfinite(r.statistic) ? chi_square_sf(r.statistic, dof) : 0.0;
  r.pass = r.p_value >= alpha;
  return r;
}

TestResult ks_test(std::string name, std::vector<double> sample,
                   const std::function<double(double)>& cdf, double alpha) {
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<std::int64_t>(sample.size());
  double d = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double f = cdf(sample[static_cast<std::size_t>(i)]);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    d = std::max({d, f - lo, hi - f});
  }
  TestResult r{std::move(name), d, n ? kolmogorov_sf(d, n) : 1.0, false};
  r.pass = r.p_value >= alpha;
  return r;
}

TestResult frequency_test(std::string name, std::int64_t successes, std::int64_t trials, double p,
                          double z_max) {
  const double n = static_cast<double>(trials);
  const double sd = std::sqrt(n * p * (1.0 - p));
  const double z = sd > 0.0 ? (static_cast<double>(successes) - n * p) / sd
                            : (static_cast<double>(successes) == n * p ? 0.0 : INFINITY);
  TestResult r{std::move(name), z, normal_two_sided(z), std::abs(z) <= z_max};
  return r;
}

double serial_correlation(std::span<const double> x, std::size_t lag) {
  if (x.size() <= lag + 1) return 0.0;
  const std::size_t m = x.size() - lag;
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_a += x[i];
    mean_b += x[i + lag];
  }
  mean_a /= static_cast<double>(m);
  mean_b /= static_cast<double>(m);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double da = x[i] - mean_a, db = x[i + lag] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<TestResult> serial_correlation_tests(std::string prefix, std::span<const double> x,
                                                 std::size_t max_lag, double bound) {
  std::vector<TestResult> out;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    const double r = serial_correlation(x, lag);
    const double z = r * std::sqrt(static_cast<double>(x.size() - lag));
    out.push_back({prefix + "_lag" + std::to_string(lag), r, normal_two_sided(z), std::abs(r) < bound});
  }
  return out;
}

TestResult block_chi_square(std::string name, std::span<const double> bits, int width, double p1,
                            double alpha) {
  const std::size_t cells = std::size_t{1} << width;
  const std::size_t blocks = bits.size() / static_cast<std::size_t>(width);
  std::vector<double> observed(cells, 0.0), expected(cells, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    std::size_t code = 0;
    for (int j = 0; j < width; ++j) {
      code = (code << 1) | (bits[b * static_cast<std::size_t>(width) + static_cast<std::size_t>(j)] > 0.5 ? 1u : 0u);
    }
    observed[code] += 1.0;
  }
  for (std::size_t code = 0; code < cells; ++code) {
    const int ones = std::popcount(code);
    expected[code] = static_cast<double>(blocks) * std::pow(p1, ones) * std::pow(1.0 - p1, width - ones);
  }
  return chi_square(std::move(name), observed, expected, alpha);
}

}  // namespace nsb::stats
