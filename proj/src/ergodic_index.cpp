#include "nsb/ergodic_index.hpp"

#include <algorithm>
#include <cmath>

#include "nsb/kernels.hpp"

namespace nsb {

namespace {

Index floor_div(Index a, Index b) {
  Index q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Index ipow(Index base, int e) {
  Index r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

std::vector<double> block_product(const FiniteProductMeasure& m, int k,
                                  const std::function<Index(int)>& coord) {
  const auto A = static_cast<Index>(m.alphabet_size());
  std::vector<std::vector<double>> marg;
  marg.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) marg.push_back(m.marginal(coord(i)));
  const auto cells = static_cast<std::size_t>(ipow(A, k));
  std::vector<double> out(cells, 1.0);
  for (std::size_t code = 0; code < cells; ++code) {
    std::size_t rest = code;
    double prod = 1.0;
    for (int i = k - 1; i >= 0; --i) {
      prod *= marg[static_cast<std::size_t>(i)][rest % static_cast<std::size_t>(A)];
      rest /= static_cast<std::size_t>(A);
    }
    out[code] = prod;
  }
  return out;
}

}  // namespace

std::size_t BlockedWindow::code(Index n, std::size_t alphabet) const {
  std::size_t c = 0;
  for (int i = 0; i < k; ++i) c = c * alphabet + static_cast<std::size_t>(at(n, i));
  return c;
}

BlockedWindow zeta(const SymbolWindow& w, int k) {
  if (k < 1) throw PreconditionError("zeta: k must be positive");
  BlockedWindow b;
  b.k = k;
  if (w.values.empty()) return b;
  const Index first = -floor_div(-w.start, k);  // ceil(start / k)
  const Index last = floor_div(w.end() + 1, k) - 1;
  b.start = first;
  for (Index n = first; n <= last; ++n) {
    for (int i = 0; i < k; ++i) b.symbols.push_back(w.at(k * n + i));
  }
  return b;
}

SymbolWindow unblock(const BlockedWindow& b) {
  SymbolWindow w;
  w.start = b.start * b.k;
  w.values = b.symbols;
  w.source = "unblock";
  return w;
}

BlockedWindow pi_interleave(const std::vector<SymbolWindow>& ws) {
  if (ws.empty()) throw PreconditionError("pi_interleave: no windows");
  for (const auto& w : ws) {
    if (w.start != ws.front().start || w.size() != ws.front().size()) {
      throw PreconditionError("pi_interleave: ranges differ");
    }
  }
  BlockedWindow b;
  b.k = static_cast<int>(ws.size());
  b.start = ws.front().start;
  const auto n = ws.front().values.size();
  b.symbols.reserve(n * ws.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& w : ws) b.symbols.push_back(w.values[j]);
  }
  return b;
}

std::vector<SymbolWindow> de_interleave(const BlockedWindow& b) {
  std::vector<SymbolWindow> ws(static_cast<std::size_t>(b.k));
  for (auto& w : ws) {
    w.start = b.start;
    w.source = "de_interleave";
  }
  for (std::size_t j = 0; j < b.symbols.size(); ++j) {
    ws[j % static_cast<std::size_t>(b.k)].values.push_back(b.symbols[j]);
  }
  return ws;
}

std::vector<double> eta_marginal(const FiniteProductMeasure& m, int k, Index n) {
  return block_product(m, k, [&](int i) { return k * n + i; });
}

std::vector<double> kappa_marginal(const FiniteProductMeasure& m, int k, Index n) {
  return block_product(m, k, [&](int) { return k * n; });
}

std::vector<double> gamma_marginal(const SequenceSpec& spec, double c, int k, Index n) {
  const double m0 = spec.perturbed_mass(c, static_cast<Index>(k) * n);
  return {m0, 1.0 - m0};
}

FiniteProductMeasure gamma_measure(const SequenceSpec& spec, double c, int k) {
  auto mass0 = [spec, c, k](Index n) { return spec.perturbed_mass(c, static_cast<Index>(k) * n); };
  return FiniteProductMeasure::binary(mass0, 0.0, "gamma[" + std::to_string(k) + "](" + spec.name + ")");
}

BlockKakutani block_kakutani_sum(const FiniteProductMeasure& m, int k, Index N, bool keep_rows) {
  if (!m.is_binary()) throw PreconditionError("block_kakutani_sum: measure must be two-symbol");
  if (k < 1 || k > 20) throw PreconditionError("block_kakutani_sum: k must lie in 1..20");
  auto row = [&](Index n) {
    BlockKakutaniRow r;
    r.n = n;
    const auto eta = eta_marginal(m, k, n);
    const auto kappa = kappa_marginal(m, k, n);
    for (std::size_t b = 0; b < eta.size(); ++b) r.alpha += (eta[b] - kappa[b]) * (eta[b] - kappa[b]);
    const double base = m.mass(k * n, 0);
    double s = 0.0;
    for (int l = 1; l <= k; ++l) {
      const double d = m.mass(k * n + l - 1, 0) - base;
      s += d * d;
    }
    r.bound = static_cast<double>(k) * k * s;
    return r;
  };

  BlockKakutani out;
  const auto count = static_cast<std::size_t>(2 * N + 1);
  std::vector<BlockKakutaniRow> rows(count);
  kernels::for_each(-N, N, [&](Index n) { rows[static_cast<std::size_t>(n + N)] = row(n); });
  out.sum = kernels::sum(-N, N, [&](Index n) { return rows[static_cast<std::size_t>(n + N)].alpha; });
  out.bound = kernels::sum(-N, N, [&](Index n) { return rows[static_cast<std::size_t>(n + N)].bound; });
  for (const auto& r : rows) {
    if (r.alpha > r.bound + 1e-15) ++out.violations;
  }
  if (keep_rows) out.rows = std::move(rows);
  return out;
}

double nu_bias(double c, Index n) {
  if (n < 1) return 0.0;
  const double b = c / std::sqrt(static_cast<double>(n));
  return b < 0.5 ? b : 0.0;
}

double hellinger_S(double c, Index k, Index N) {
  if (k == 0) return 0.0;
  // A term is zero unless n >= 1 or n - k >= 1.
  const Index lo = std::max<Index>(-N, std::min<Index>(1, 1 + k));
  return kernels::sum(lo, N, [&](Index n) {
    const double d = nu_bias(c, n - k) - nu_bias(c, n);
    return d * d;
  });
}

double hellinger_S_total(double c, Index k) {
  if (k == 0) return 0.0;
  k = std::abs(k);  // the sum over Z is symmetric in k
  const double c2 = c * c;
  // Past M both a_{n-k} and a_n are unclamped, so the summand is smooth.
  const auto clamp_end = static_cast<Index>(std::ceil(4.0 * c2)) + 1;
  const Index M = k + std::max<Index>(2000, 4 * clamp_end);
  double head = kernels::sum(1, M - 1, [&](Index n) {
    const double d = nu_bias(c, n - k) - nu_bias(c, n);
    return d * d;
  });
  const double kk = static_cast<double>(k);
  auto phi = [&](double x) {
    const double d = 1.0 / std::sqrt(x - kk) - 1.0 / std::sqrt(x);
    return c2 * d * d;
  };
  auto dphi = [&](double x) {
    const double d = 1.0 / std::sqrt(x - kk) - 1.0 / std::sqrt(x);
    const double dd = -0.5 * std::pow(x - kk, -1.5) + 0.5 * std::pow(x, -1.5);
    return 2.0 * c2 * d * dd;
  };
  const double m = static_cast<double>(M);
  // Integral of phi over [M, inf): c^2 (-log 16 - F(M)), F(x) = log(x(x-k) / (sqrt x + sqrt(x-k))^4).
  const double s = std::sqrt(m) + std::sqrt(m - kk);
  const double F = std::log(m) + std::log(m - kk) - 4.0 * std::log(s);
  const double integral = c2 * (-std::log(16.0) - F);
  return head + integral + phi(m) / 2.0 - dphi(m) / 12.0;
}

double Dissipativity::increment_last_decade() const {
  if (partial.empty()) return 0.0;
  const auto lo = static_cast<std::size_t>(std::max<Index>(1, K / 10));
  return partial.back() - partial[lo - 1];
}

Dissipativity dissipativity_partial(double c, Index K) {
  if (K < 1) throw PreconditionError("dissipativity_partial: K must be positive");
  Dissipativity d;
  d.c = c;
  d.K = K;
  auto& S = d.S;
  S.assign(static_cast<std::size_t>(K), 0.0);
  kernels::for_each(1, K, [&](Index k) { S[static_cast<std::size_t>(k - 1)] = hellinger_S_total(c, k); });
  d.partial.resize(S.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    acc += std::exp(-S[i] / 2.0);
    d.partial[i] = acc;
  }
  const Index lo = std::max<Index>(1, K / 10);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double cnt = 0;
  for (Index k = lo; k <= K; ++k) {
    const double x = std::log(static_cast<double>(k));
    const double y = -S[static_cast<std::size_t>(k - 1)] / 2.0;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1;
  }
  const double den = cnt * sxx - sx * sx;
  d.slope = den > 0.0 ? (cnt * sxy - sx * sy) / den : 0.0;
  return d;
}

ScalingIdentityReport rpm_scaling_identity(double p, double q, double c, double dsmall, Index N) {
  if (!(dsmall > 0.0 && dsmall <= c)) throw PreconditionError("rpm_scaling_identity: need 0 < d <= c");
  if (!(p > 0.0 && p <= q && q <= 0.5)) throw PreconditionError("rpm_scaling_identity: need 0 < p <= q <= 1/2");
  ScalingIdentityReport r;
  r.N = N;
  const auto sp = inverse_sqrt_sequence(p);
  const auto sq = inverse_sqrt_sequence(q);

  // Scaling check on the unclamped marginal p + a_n, at a_n small enough to stay in (0, 1).
  const auto base = FiniteProductMeasure::binary([&](Index n) { return p + 0.5 * p * sp.a(n); }, 0.0, "base");
  const auto ex = rpm(base, q, {p, 1.0 - p});
  const auto mu_pc = make_mu_pc(sp, c);
  const auto first = rpm(mu_pc, dsmall / c, {p, 1.0 - p});
  const auto mu_qc = make_mu_pc(sq, c);
  const auto second = rpm(mu_qc, p / q, {0.0, 1.0});
  const double c2 = p * c / q;

  for (Index n = -N; n <= N; ++n) {
    r.rpm_base_max_error =
        std::max(r.rpm_base_max_error, std::abs(ex.mass(n, 0) - (p + q * 0.5 * p * sp.a(n))));

    const double lhs1 = sp.perturbed_mass(dsmall, n), rhs1 = first.mass(n, 0);
    if (sp.clamped(dsmall, n) || sp.clamped(c, n)) {
      if (lhs1 != rhs1) r.first_mismatch.push_back(n);
    } else {
      r.first_max_error = std::max(r.first_max_error, std::abs(lhs1 - rhs1));
    }

    const double lhs2 = sp.perturbed_mass(c2, n), rhs2 = second.mass(n, 0);
    if (sp.clamped(c2, n) || sq.clamped(c, n)) {
      if (lhs2 != rhs2) r.second_mismatch.push_back(n);
    } else {
      r.second_max_error = std::max(r.second_max_error, std::abs(lhs2 - rhs2));
    }
  }
  return r;
}

IndexReport index_report(double c, double D, int kmax, Index K) {
  if (!(c > 0.0) || !(D > 0.0)) throw PreconditionError("index_report: c and D must be positive");
  if (kmax < 1) throw PreconditionError("index_report: kmax must be positive");
  IndexReport r;
  r.c = c;
  r.D = D;
  r.kmax = kmax;
  r.K = K;
  bool all_conservative = true;
  for (int k = 1; k <= kmax; ++k) {
    IndexRow row;
    row.k = k;
    row.c_eff = c * std::sqrt(static_cast<double>(k));
    if (row.c_eff < D) {
      row.classification = "conservative_proxy";
      if (all_conservative) r.index = k;
    } else {
      row.classification = row.c_eff == D ? "critical" : "dissipative_proxy";
      all_conservative = false;
    }
    row.S = hellinger_S_total(row.c_eff, K);
    row.partial = dissipativity_partial(row.c_eff, K).partial.back();
    r.rows.push_back(row);
  }
  r.saturated = all_conservative;
  return r;
}

nlohmann::json to_json(const IndexReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"k", row.k},
                    {"c_eff", row.c_eff},
                    {"classification", row.classification},
                    {"S", row.S},
                    {"partial_dissip", row.partial}});
  }
  return {{"c", r.c}, {"d_assumed", r.D}, {"kmax", r.kmax}, {"K", r.K},
          {"index", r.index}, {"saturated", r.saturated}, {"rows", rows}};
}

nlohmann::json to_json(const ScalingIdentityReport& r) {
  return {{"N", r.N},
          {"rpm_base_max_error", r.rpm_base_max_error},
          {"first_max_error", r.first_max_error},
          {"second_max_error", r.second_max_error},
          {"first_mismatch", r.first_mismatch},
          {"second_mismatch", r.second_mismatch}};
}

}  // namespace nsb
