#include "nsb/product_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nsb/kernels.hpp"

namespace nsb {

namespace {

void check_probability_vector(const std::vector<double>& v, const char* what) {
  double total = 0.0;
  for (double x : v) {
    if (!(x >= 0.0)) throw PreconditionError(std::string(what) + ": negative or NaN mass");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw PreconditionError(std::string(what) + ": masses do not sum to 1");
  }
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

FiniteProductMeasure::FiniteProductMeasure(std::vector<std::string> alphabet, MassFn mass,
                                           double doeblin_hint, std::string description)
    : alphabet_(std::move(alphabet)),
      mass_(std::move(mass)),
      doeblin_hint_(doeblin_hint),
      description_(std::move(description)) {
  if (alphabet_.empty()) throw PreconditionError("empty alphabet");
}

FiniteProductMeasure FiniteProductMeasure::binary(std::function<double(Index)> mass0,
                                                  double doeblin_hint, std::string description) {
  auto fn = [mass0 = std::move(mass0)](Index n, Symbol s) {
    const double p0 = mass0(n);
    return s == 0 ? p0 : 1.0 - p0;
  };
  return FiniteProductMeasure({"0", "1"}, std::move(fn), doeblin_hint, std::move(description));
}

std::vector<double> FiniteProductMeasure::marginal(Index n) const {
  std::vector<double> out(alphabet_.size());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = mass_(n, static_cast<Symbol>(s));
  return out;
}

double SequenceSpec::perturbed_mass(double c, Index n) const {
  const double x = p + c * a(n);
  return (x > 0.0 && x < 1.0) ? x : p;
}

bool SequenceSpec::clamped(double c, Index n) const {
  const double x = p + c * a(n);
  return !(x > 0.0 && x < 1.0);
}

SequenceSpec inverse_sqrt_sequence(double p) {
  return {p, [](Index n) { return n >= 1 ? 1.0 / std::sqrt(static_cast<double>(n)) : 0.0; },
          "inv_sqrt"};
}

SequenceSpec zero_sequence(double p) {
  return {p, [](Index) { return 0.0; }, "zero"};
}

FiniteProductMeasure make_iid(std::vector<double> probabilities) {
  check_probability_vector(probabilities, "make_iid");
  std::vector<std::string> alphabet;
  std::string desc = "iid(";
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    alphabet.push_back(std::to_string(i));
    desc += (i ? "," : "") + fmt_double(probabilities[i]);
  }
  desc += ")";
  const double lo = *std::min_element(probabilities.begin(), probabilities.end());
  auto fn = [probs = std::move(probabilities)](Index, Symbol s) {
    return probs[static_cast<std::size_t>(s)];
  };
  return FiniteProductMeasure(std::move(alphabet), std::move(fn), lo / 2, desc);
}

FiniteProductMeasure make_nu_c(double c) {
  if (!(c > 0.0)) throw PreconditionError("make_nu_c: c must be positive");
  auto mass0 = [c](Index n) {
    if (n < 1) return 0.5;
    const double bump = c / std::sqrt(static_cast<double>(n));
    return bump < 0.5 ? 0.5 + bump : 0.5;
  };
  return FiniteProductMeasure::binary(mass0, 0.0, "nu_c(c=" + fmt_double(c) + ")");
}

FiniteProductMeasure make_mu_pc(const SequenceSpec& spec, double c) {
  if (!(spec.p > 0.0 && spec.p < 1.0)) throw PreconditionError("make_mu_pc: p must lie in (0,1)");
  if (!(c > 0.0)) throw PreconditionError("make_mu_pc: c must be positive");
  auto mass0 = [spec, c](Index n) { return spec.perturbed_mass(c, n); };
  return FiniteProductMeasure::binary(
      mass0, 0.0,
      "mu_pc(p=" + fmt_double(spec.p) + ",c=" + fmt_double(c) + ",a=" + spec.name + ")");
}

DoeblinResult doeblin_delta(const FiniteProductMeasure& m, IndexRange range) {
  const auto k = static_cast<Symbol>(m.alphabet_size());
  auto row_min = [&](Index n) {
    double best = m.mass(n, 0);
    for (Symbol s = 1; s < k; ++s) best = std::min(best, m.mass(n, s));
    return best;
  };
  DoeblinResult out;
  out.delta = range.empty() ? 0.0 : kernels::min(range.lo, range.hi, row_min);
  if (!(out.delta > 0.0)) {
    for (Index n = range.lo; n <= range.hi; ++n) {
      if (!(row_min(n) > 0.0)) {
        out.zero_mass_index = n;
        break;
      }
    }
    out.delta = 0.0;
  }
  return out;
}

double kakutani_shift_sum(const FiniteProductMeasure& m, Index k, Index N) {
  if (!m.is_binary()) throw PreconditionError("kakutani_shift_sum: two-symbol alphabet required");
  if (k == 0) return 0.0;
  return kernels::sum(-N, N, [&](Index n) {
    const double d = m.mass(n, 0) - m.mass(n - k, 0);
    return d * d;
  });
}

SeriesDiagnostic kakutani_shift_diagnostic(const FiniteProductMeasure& m, Index k, Index N) {
  SeriesDiagnostic out;
  out.value = kakutani_shift_sum(m, k, N);
  out.tail_increment = out.value - kakutani_shift_sum(m, k, N / 10);
  return out;
}

double log_rn_shift(const FiniteProductMeasure& m, Index k, const SymbolWindow& w) {
  double total = 0.0;
  for (Index n = w.start; n <= w.end(); ++n) {
    const Symbol x = w.at(n);
    const double num = m.mass(n - k, x);
    const double den = m.mass(n, x);
    if (!(num > 0.0)) throw ZeroMassError("log_rn_shift: zero mass at shifted index", n - k);
    if (!(den > 0.0)) throw ZeroMassError("log_rn_shift: zero mass", n);
    total += std::log(num / den);
  }
  return total;
}

double log_rn_swap(const FiniteProductMeasure& m, Index i, Index j, Symbol xi, Symbol xj) {
  if (i == j || xi == xj) return 0.0;
  const double a = m.mass(i, xj), b = m.mass(j, xi), c = m.mass(i, xi), d = m.mass(j, xj);
  if (!(a > 0.0) || !(c > 0.0)) throw ZeroMassError("log_rn_swap: zero mass", i);
  if (!(b > 0.0) || !(d > 0.0)) throw ZeroMassError("log_rn_swap: zero mass", j);
  return (std::log(a) + std::log(b)) - (std::log(c) + std::log(d));
}

FiniteProductMeasure rpm(const FiniteProductMeasure& m, double p, std::vector<double> alpha) {
  if (alpha.size() != m.alphabet_size()) throw PreconditionError("rpm: alpha alphabet mismatch");
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("rpm: p must lie in [0,1]");
  check_probability_vector(alpha, "rpm alpha");
  std::string desc = "rpm(" + m.description() + ",p=" + fmt_double(p) + ")";
  auto fn = [m, p, alpha = std::move(alpha)](Index n, Symbol s) {
    return p * m.mass(n, s) + (1.0 - p) * alpha[static_cast<std::size_t>(s)];
  };
  return FiniteProductMeasure(m.alphabet(), std::move(fn), 0.0, std::move(desc));
}

FiniteProductMeasure ri(const FiniteProductMeasure& m, double p, std::vector<double> alpha) {
  if (alpha.size() != m.alphabet_size()) throw PreconditionError("ri: alpha alphabet mismatch");
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("ri: p must lie in [0,1]");
  check_probability_vector(alpha, "ri alpha");
  std::vector<std::string> alphabet;
  for (const auto& a : m.alphabet()) {
    alphabet.push_back(a + "H");
    alphabet.push_back(a + "T");
  }
  std::string desc = "ri(" + m.description() + ",p=" + fmt_double(p) + ")";
  auto fn = [m, p, alpha = std::move(alpha)](Index n, Symbol s) {
    const Symbol a = s / 2;
    return (s % 2 == 0) ? p * m.mass(n, a) : (1.0 - p) * alpha[static_cast<std::size_t>(a)];
  };
  return FiniteProductMeasure(std::move(alphabet), std::move(fn), 0.0, std::move(desc));
}

// ---------------------------------------------------------------------------

double PiecewiseDensity::operator()(double u) const {
  if (values.empty() || u < breaks.front() || u > breaks.back()) return 0.0;
  auto it = std::upper_bound(breaks.begin(), breaks.end(), u);
  auto i = static_cast<std::size_t>(it - breaks.begin());
  if (i == 0) return 0.0;
  if (i > values.size()) i = values.size();  // u == last break
  return values[i - 1];
}

double PiecewiseDensity::integral() const {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) total += values[i] * (breaks[i + 1] - breaks[i]);
  return total;
}

double PiecewiseDensity::mass(double lo, double hi) const {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::max(lo, breaks[i]);
    const double b = std::min(hi, breaks[i + 1]);
    if (b > a) total += values[i] * (b - a);
  }
  return total;
}

double PiecewiseDensity::inverse_cdf(double t) const {
  const double target = t * integral();
  double cum = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= 0.0) continue;
    last = i;
    const double m = values[i] * (breaks[i + 1] - breaks[i]);
    if (target < cum + m) {
      const double u = breaks[i] + (target - cum) / values[i];
      return std::min(u, std::nextafter(breaks[i + 1], breaks[i]));
    }
    cum += m;
  }
  return std::nextafter(breaks[last + 1], breaks[last]);
}

DensityFamily::DensityFamily(double lo, double hi, GenerationFn generation,
                             std::string description)
    : lo_(lo), hi_(hi), generation_(std::move(generation)), description_(std::move(description)) {
  if (!(lo < hi)) throw PreconditionError("DensityFamily: empty support");
}

double DensityFamily::density(Index n, double u) const { return generation_(n)(u); }

double log_rn_swap(const DensityFamily& m, Index i, Index j, double xi, double xj) {
  if (i == j || xi == xj) return 0.0;
  const auto fi = m.pieces(i);
  const auto fj = m.pieces(j);
  const double a = fi(xj), b = fj(xi), c = fi(xi), d = fj(xj);
  if (!(a > 0.0) || !(c > 0.0)) throw ZeroMassError("log_rn_swap: zero density", i);
  if (!(b > 0.0) || !(d > 0.0)) throw ZeroMassError("log_rn_swap: zero density", j);
  return (std::log(a) + std::log(b)) - (std::log(c) + std::log(d));
}

std::vector<double> generation_log_ratios(const DensityFamily& m, Index n) {
  const auto prev = m.pieces(n - 1);
  const auto cur = m.pieces(n);
  std::vector<double> cuts = prev.breaks;
  cuts.insert(cuts.end(), cur.breaks.begin(), cur.breaks.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double x = prev(mid), y = cur(mid);
    if (x > 0.0 && y > 0.0) out.push_back(std::log(x / y));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            out.end());
  return out;
}

DensityFamily shift_family(const DensityFamily& m, double offset) {
  auto gen = [m, offset](Index n) {
    auto pd = m.pieces(n);
    for (double& b : pd.breaks) b += offset;
    return pd;
  };
  return DensityFamily(m.support_lo() + offset, m.support_hi() + offset, gen,
                       "shift(" + m.description() + "," + fmt_double(offset) + ")");
}

}  // namespace nsb
