// nsb: command-line front end.
//
// Exit status: 0 all checks passed, 1 a check failed, 2 bad configuration,
// 3 runtime error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nsb/ergodic_index.hpp"
#include "nsb/iid_factor.hpp"
#include "nsb/kernels.hpp"
#include "nsb/marker_filler.hpp"
#include "nsb/matching.hpp"
#include "nsb/report.hpp"
#include "nsb/sampling.hpp"
#include "nsb/type_iii.hpp"

namespace fs = std::filesystem;
using nsb::Index;

namespace {

struct Global {
  std::string out_dir;
  int threads = 0;
};

// Measure given either as one spec string or as --family with parameters.
struct MeasureArgs {
  std::string spec;
  std::string family;
  std::optional<double> c, p;
  std::string seq = "inv_sqrt";

  void add_to(CLI::App* app) {
    app->add_option("--measure", spec, "measure spec, e.g. iid:0.3, nu_c:0.1, mu_pc:p=0.3,c=0.4");
    app->add_option("--family", family, "iid | nu_c | mu_pc");
    app->add_option("--c", c, "perturbation size");
    app->add_option("--p", p, "base mass of 0");
    app->add_option("--seq", seq, "mu_pc sequence: inv_sqrt | zero");
  }

  nsb::MeasureSpec resolve() const {
    if (!spec.empty()) return nsb::MeasureSpec::parse(spec);
    if (family.empty()) throw nsb::ConfigError("give --measure or --family");
    nlohmann::json j = {{"family", family}};
    if (family == "iid") {
      if (!p) throw nsb::ConfigError("iid needs --p");
      j["p"] = *p;
    } else if (family == "nu_c") {
      if (!c) throw nsb::ConfigError("nu_c needs --c");
      j["c"] = *c;
    } else {
      if (!c || !p) throw nsb::ConfigError("mu_pc needs --p and --c");
      j["p"] = *p;
      j["c"] = *c;
      j["seq"] = seq;
    }
    return nsb::MeasureSpec::from_json(j);
  }
};

fs::path output_path(const Global& g, const std::string& given, const std::string& fallback) {
  if (!given.empty()) return given;
  return fs::path(g.out_dir) / fallback;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw nsb::Error("cannot open " + p.string() + " for writing");
  return os;
}

int finish(const nsb::Report& r, const fs::path& path) {
  auto os = open_out(path);
  os << r.dump();
  std::cout << path.string() << (r.all_pass() ? ": pass\n" : ": FAIL\n");
  return r.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct MeasureCheck {
  MeasureArgs measure;
  Index n = 100000;
  std::vector<Index> ks{1, 2, 5, 10};
  double tail_tol = 1e-2;
  std::string out;

  int run(const Global& g) const {
    const auto spec = measure.resolve();
    const auto m = spec.build();
    nsb::Report r;
    r.command = "measure check";
    r.config = {{"measure", spec.to_json()}, {"n", n}, {"k", ks}, {"tail_tol", tail_tol}};

    const auto doeblin = nsb::doeblin_delta(m, nsb::IndexRange::symmetric(n));
    r.data["doeblin_delta"] = doeblin.delta;
    r.add("doeblin_delta", doeblin.delta, 0.0, doeblin.delta > 0.0);

    nlohmann::json series = nlohmann::json::array();
    for (Index k : ks) {
      const auto d = nsb::kakutani_shift_diagnostic(m, k, n);
      series.push_back(nsb::series_record(spec.family, spec.to_json(), k, n, d));
      const bool ok = std::isfinite(d.value) && std::abs(d.tail_increment) <= tail_tol * std::max(d.value, 1e-300);
      r.add("kakutani_shift_sum_k" + std::to_string(k), d.value, tail_tol, ok || d.value == 0.0);
    }
    r.data["kakutani_shift_sum"] = series;
    if (m.is_binary()) {
      const auto b = nsb::bias_square_diagnostic(m, n);
      r.data["bias_square_sum"] = nsb::series_record(spec.family, spec.to_json(), 0, n, b);
      const bool ok = b.value == 0.0 || std::abs(b.tail_increment) <= 1e-4 * b.value;
      r.add("bias_square_sum", b.value, 1e-4, ok);
    }
    return finish(r, output_path(g, out, "measure_check.json"));
  }
};

struct MeasureSample {
  MeasureArgs measure;
  Index n = 1000;
  Index start = 0;
  std::uint64_t seed = 1;
  std::string out;

  int run(const Global& g) const {
    const auto spec = measure.resolve();
    const auto m = spec.build();
    const auto w = nsb::sample_window(m, nsb::IndexRange::from_start(start, n), nsb::SeedStream(seed));
    const auto path = output_path(g, out, "sample.csv");
    auto os = open_out(path);
    nsb::write_window_csv(os, w);
    std::cout << path.string() << '\n';
    return 0;
  }
};

struct MeasureDecompose {
  MeasureArgs measure;
  std::string bits;
  Index n = 1000;
  Index start = 0;
  std::uint64_t seed = 1;
  std::string out;

  int run(const Global& g) const {
    nsb::SymbolWindow w;
    nsb::Report r;
    r.command = "measure decompose";
    if (!bits.empty()) {
      if (bits.find_first_not_of("01") != std::string::npos) throw nsb::ConfigError("--bits takes 0/1 only");
      w = nsb::bits_from_string(bits, start);
      r.config = {{"bits", bits}, {"start", start}};
    } else {
      const auto spec = measure.resolve();
      w = nsb::sample_window(spec.build(), nsb::IndexRange::from_start(start, n), nsb::SeedStream(seed));
      r.config = {{"measure", spec.to_json()}, {"n", n}, {"start", start}, {"seed", seed}};
    }
    const auto d = nsb::decompose(w);
    r.data = nsb::to_json(d);
    r.add("markers", static_cast<double>(d.markers.size()), 0.0, true);
    r.add("special_fillers", static_cast<double>(d.special.size()), 0.0, true);
    return finish(r, output_path(g, out, "decompose.json"));
  }
};

struct FactorRunCmd {
  MeasureArgs measure;
  Index n = 1000000;
  std::uint64_t seed = 1;
  double max_censor = 0.05;
  std::string out;
  std::string w_out;

  int run(const Global& g) const {
    const auto spec = measure.resolve();
    const auto m = spec.build();
    nsb::Report r;
    r.command = "factor run";
    r.config = {{"measure", spec.to_json()}, {"n", n}, {"seed", seed}, {"max_censor", max_censor}};
    const auto run = nsb::run_iid_factor(m, nsb::IndexRange::from_start(0, n), nsb::SeedStream(seed));
    const auto& d = run.diagnostics;
    r.data = nsb::to_json(d);
    for (const auto& t : d.tests) r.add(t.name, t.statistic, 0.0, t.pass);
    r.add("censor_fraction", d.censor_fraction, max_censor, d.censor_fraction < max_censor);
    if (!w_out.empty()) {
      auto os = open_out(w_out);
      nsb::write_window_csv(os, run.output.w);
      r.artifacts.push_back(w_out);
    }
    return finish(r, output_path(g, out, "factor_report.json"));
  }
};

struct MatchRun {
  MeasureArgs measure;
  std::string word;
  int d = 0;
  Index n = 100000;
  std::uint64_t seed = 1;
  std::string out;
  std::string assignment_out;
  std::string histogram_out;
  std::string plot_out;

  int run(const Global& g) const {
    nsb::Report r;
    r.command = "match run";
    nsb::ABSequence z;
    int cap = d;
    if (!word.empty()) {
      z = nsb::ABSequence::from_string(word);
      if (cap < 1) throw nsb::ConfigError("--d is required with --word");
      r.config = {{"word", word}, {"d", cap}};
    } else {
      const auto spec = measure.resolve();
      const auto m = spec.build();
      const auto range = nsb::IndexRange::from_start(0, n);
      const auto w = nsb::sample_window(m, range, nsb::SeedStream(seed));
      z = nsb::good_to_ab(w).first;
      if (cap < 1) cap = nsb::required_d(nsb::good_prob_lower_bound(m, range));
      r.config = {{"measure", spec.to_json()}, {"n", n}, {"seed", seed}, {"d", d}};
    }
    r.data["capacity"] = cap;
    const auto a = nsb::meshalkin_match(z, cap);

    // The walk criterion must predict every match distance exactly.
    Index disagreements = 0;
    for (Index i = z.start; i <= z.end(); ++i) {
      if (z.at(i) != nsb::Letter::b) continue;
      const auto radius = nsb::matching_radius(z, cap, i);
      const auto partner = a.partner(i);
      if (radius.has_value() != partner.has_value() || (partner && *partner - i != *radius)) ++disagreements;
    }
    r.add("walk_disagreements", static_cast<double>(disagreements), 0.0, disagreements == 0);
    r.add("matched", static_cast<double>(a.pairs.size()), 0.0, true);
    r.add("unmatched", static_cast<double>(a.unmatched.size()), 0.0, true);
    r.add("rounds", a.rounds, 0.0, true);

    const auto apath = output_path(g, assignment_out, "assignment.csv");
    {
      auto os = open_out(apath);
      nsb::write_assignment_csv(os, a);
    }
    const auto hpath = output_path(g, histogram_out, "radius_histogram.csv");
    {
      auto os = open_out(hpath);
      nsb::write_radius_histogram_csv(os, z, cap);
    }
    // P(R > k) over the matched b's.
    const auto hist = nsb::radius_histogram(z, cap);
    std::int64_t total = 0;
    for (const auto& [k, c] : hist) total += c;
    nsb::PlotSeries tail{"radius_tail", {}, {}};
    std::int64_t above = total;
    for (const auto& [k, c] : hist) {
      above -= c;
      tail.x.push_back(static_cast<double>(k));
      tail.y.push_back(total ? static_cast<double>(above) / static_cast<double>(total) : 0.0);
    }
    const auto ppath = output_path(g, plot_out, "radius_tail.csv");
    {
      auto os = open_out(ppath);
      nsb::emit_plot_data(os, {tail});
    }
    r.artifacts = {apath.string(), hpath.string(), ppath.string()};
    return finish(r, output_path(g, out, "match_report.json"));
  }
};

struct TypeIIIRatios {
  double lambda = 0.25;
  double lambda_prime = 0.5;
  Index n = 5;
  Index samples = 100000;
  std::uint64_t seed = 1;
  std::string out;
  std::string hist_out;
  std::string plot_out;

  int run(const Global& g) const {
    if (n < 1) throw nsb::ConfigError("--n must be at least 1");
    const auto setup = nsb::make_hmap(nsb::TypeIIISpec::standard(lambda), lambda_prime);
    const auto& fam = setup.family;
    const auto& h = setup.h;
    nsb::Report r;
    r.command = "typeiii ratios";
    r.config = {{"lambda", lambda}, {"lambda_prime", lambda_prime}, {"n", n}, {"samples", samples}, {"seed", seed}};
    r.data["p"] = h.p;
    r.data["a1"] = h.a1;
    r.data["logs_commensurable"] = nsb::logs_commensurable(lambda, lambda_prime);

    // Listing against the branch sum, piece by piece.
    double listing_err = 0.0;
    for (Index k : {n - 1, n}) {
      const auto gl = nsb::g_listing(fam, h, k);
      for (std::size_t i = 0; i < gl.values.size(); ++i) {
        if (!(gl.breaks[i + 1] > gl.breaks[i])) continue;
        const double mid = 0.5 * (gl.breaks[i] + gl.breaks[i + 1]);
        listing_err = std::max(listing_err, std::abs(gl.values[i] - nsb::pushforward_density(fam, h, k, mid)));
      }
      r.add("g_integral_n" + std::to_string(k), gl.integral(), 1e-12, std::abs(gl.integral() - 1.0) <= 1e-12);
    }
    r.add("listing_vs_pushforward", listing_err, 1e-12, listing_err <= 1e-12);

    // Ratio profile at points drawn from g_n.
    const auto gfam = nsb::g_family(fam, h);
    const auto vs = nsb::sample_generation(gfam, n, samples, nsb::SeedStream(seed).child("v", 0));
    const double allowed[] = {std::log(lambda_prime), 0.0, -std::log(lambda_prime)};
    std::map<double, std::int64_t> counts;
    Index outside = 0, skipped = 0;
    for (double v : vs) {
      double lr = 0.0;
      try {
        lr = std::log(nsb::ratio_profile(fam, h, n, v));
      } catch (const nsb::PreconditionError&) {
        ++skipped;
        continue;
      }
      bool hit = false;
      for (double a : allowed) {
        if (std::abs(lr - a) <= 1e-9) {
          counts[a] += 1;
          hit = true;
        }
      }
      if (!hit) ++outside;
    }
    r.add("ratio_outside_set", static_cast<double>(outside), 1e-9, outside == 0);
    r.data["ratio_skipped_at_breakpoints"] = skipped;

    // Transposition log-RN values of the f-family lie on (log lambda) Z.
    const auto ffam = nsb::f_family(fam);
    auto rng = nsb::SeedStream(seed).substream("swap", 0);
    Index swap_outside = 0;
    const double ll = std::log(lambda);
    const Index pairs = std::min<Index>(samples, 10000);
    for (Index t = 0; t < pairs; ++t) {
      const Index i = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(n + 5));
      const Index j = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(n + 5));
      const double xi = ffam.pieces(i).inverse_cdf(rng.uniform());
      const double xj = ffam.pieces(j).inverse_cdf(rng.uniform());
      const double v = nsb::log_rn_swap(ffam, i, j, xi, xj) / ll;
      if (std::abs(v - std::round(v)) * std::abs(ll) > 1e-9) ++swap_outside;
    }
    r.add("swap_outside_lattice", static_cast<double>(swap_outside), 1e-9, swap_outside == 0);

    const auto hpath = output_path(g, hist_out, "log_rn_histogram.csv");
    {
      auto os = open_out(hpath);
      os << "log_ratio,count\n";
      for (const auto& [v, c] : counts) os << nsb::format_double(v) << ',' << c << '\n';
    }
    // Empirical density of the draws against the listing.
    const auto bins = nsb::histogram_against(vs, nsb::g_listing(fam, h, n), 4);
    nsb::PlotSeries emp{"g_empirical", {}, {}}, exact{"g_exact", {}, {}};
    double worst_z = 0.0;
    for (const auto& b : bins) {
      const double mid = 0.5 * (b.lo + b.hi), width = b.hi - b.lo;
      emp.x.push_back(mid);
      emp.y.push_back(static_cast<double>(b.observed) / static_cast<double>(samples) / width);
      exact.x.push_back(mid);
      exact.y.push_back(b.expected / width);
      worst_z = std::max(worst_z, std::abs(b.z));
    }
    r.data["histogram_max_abs_z"] = worst_z;
    const auto ppath = output_path(g, plot_out, "pushforward_histogram.csv");
    {
      auto os = open_out(ppath);
      nsb::emit_plot_data(os, {emp, exact});
    }
    r.artifacts = {hpath.string(), ppath.string()};
    return finish(r, output_path(g, out, "typeiii_report.json"));
  }
};

struct IndexScan {
  std::optional<double> c;
  std::optional<double> d_assumed;
  int kmax = 10;
  Index K = 1000;
  std::string out;
  std::string csv_out;
  std::string plot_out;

  int run(const Global& g) const {
    if (!c || !d_assumed) throw nsb::ConfigError("index scan needs --c and --d-assumed");
    const auto rep = nsb::index_report(*c, *d_assumed, kmax, K);
    nsb::Report r;
    r.command = "index scan";
    r.config = {{"c", *c}, {"d_assumed", *d_assumed}, {"kmax", kmax}, {"K", K}};
    r.data = nsb::to_json(rep);
    r.add("index", rep.index, 0.0, true);

    const auto cpath = output_path(g, csv_out, "index_scan.csv");
    {
      auto os = open_out(cpath);
      os << "k,S,partial_dissip,classification\n";
      for (const auto& row : rep.rows) {
        os << row.k << ',' << nsb::format_double(row.S) << ',' << nsb::format_double(row.partial) << ','
           << row.classification << '\n';
      }
    }
    const auto dis = nsb::dissipativity_partial(*c, K);
    nsb::PlotSeries s{"S", {}, {}};
    for (Index k = 1; k <= K; ++k) {
      s.x.push_back(std::log(static_cast<double>(k)));
      s.y.push_back(dis.S[static_cast<std::size_t>(k - 1)]);
    }
    r.data["tail_slope"] = dis.slope;
    const auto ppath = output_path(g, plot_out, "hellinger_S.csv");
    {
      auto os = open_out(ppath);
      nsb::emit_plot_data(os, {s});
    }
    r.artifacts = {cpath.string(), ppath.string()};
    return finish(r, output_path(g, out, "index_report.json"));
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonsingular Bernoulli shift toolkit"};
  app.set_config("--config", "", "TOML/INI configuration; command-line flags take precedence");
  app.require_subcommand(1);

  Global g;
  const char* env_dir = std::getenv("NSB_OUTPUT_DIR");
  g.out_dir = env_dir ? env_dir : ".";
  app.add_option("--out-dir", g.out_dir, "default directory for outputs (env NSB_OUTPUT_DIR)");
  app.add_option("--threads", g.threads, "worker threads; 0 keeps the OpenMP default");

  std::function<int()> action;

  auto* measure = app.add_subcommand("measure", "product measure checks and sampling");
  measure->require_subcommand(1);
  MeasureCheck check;
  auto* c_check = measure->add_subcommand("check", "Doeblin, Kakutani and bias diagnostics");
  check.measure.add_to(c_check);
  c_check->add_option("--n", check.n, "truncation |n| <= N");
  c_check->add_option("--k", check.ks, "shift amounts")->delimiter(',');
  c_check->add_option("--tail-tol", check.tail_tol, "allowed last-decade increment relative to the sum");
  c_check->add_option("--out", check.out, "report path");
  c_check->callback([&] { action = [&] { return check.run(g); }; });

  MeasureSample sample;
  auto* c_sample = measure->add_subcommand("sample", "sample a window to CSV");
  sample.measure.add_to(c_sample);
  c_sample->add_option("--n", sample.n, "window length");
  c_sample->add_option("--start", sample.start, "first index");
  c_sample->add_option("--seed", sample.seed, "root seed");
  c_sample->add_option("--out", sample.out, "CSV path");
  c_sample->callback([&] { action = [&] { return sample.run(g); }; });

  MeasureDecompose decompose;
  auto* c_dec = measure->add_subcommand("decompose", "marker/filler decomposition as JSON");
  decompose.measure.add_to(c_dec);
  c_dec->add_option("--bits", decompose.bits, "literal 0/1 word");
  c_dec->add_option("--n", decompose.n, "window length when sampling");
  c_dec->add_option("--start", decompose.start, "first index");
  c_dec->add_option("--seed", decompose.seed, "root seed");
  c_dec->add_option("--out", decompose.out, "report path");
  c_dec->callback([&] { action = [&] { return decompose.run(g); }; });

  auto* factor = app.add_subcommand("factor", "i.i.d. factor pipeline");
  factor->require_subcommand(1);
  FactorRunCmd frun;
  auto* c_frun = factor->add_subcommand("run", "run the pipeline and its statistical suite");
  frun.measure.add_to(c_frun);
  c_frun->add_option("--n", frun.n, "window length");
  c_frun->add_option("--seed", frun.seed, "root seed");
  c_frun->add_option("--max-censor", frun.max_censor, "allowed censoring fraction");
  c_frun->add_option("--out", frun.out, "report path");
  c_frun->add_option("--w-out", frun.w_out, "optional CSV of the output W");
  c_frun->callback([&] { action = [&] { return frun.run(g); }; });

  auto* match = app.add_subcommand("match", "Meshalkin matching");
  match->require_subcommand(1);
  MatchRun mrun;
  auto* c_mrun = match->add_subcommand("run", "match a word or the special fillers of a sample");
  mrun.measure.add_to(c_mrun);
  c_mrun->add_option("--word", mrun.word, "literal a/b word");
  c_mrun->add_option("--d", mrun.d, "capacity (default: from the good-block bound)");
  c_mrun->add_option("--n", mrun.n, "window length when sampling");
  c_mrun->add_option("--seed", mrun.seed, "root seed");
  c_mrun->add_option("--out", mrun.out, "report path");
  c_mrun->add_option("--assignment-out", mrun.assignment_out, "assignment CSV path");
  c_mrun->add_option("--histogram-out", mrun.histogram_out, "radius histogram CSV path");
  c_mrun->add_option("--plot-out", mrun.plot_out, "radius tail plot data path");
  c_mrun->callback([&] { action = [&] { return mrun.run(g); }; });

  auto* typeiii = app.add_subcommand("typeiii", "type III density families");
  typeiii->require_subcommand(1);
  TypeIIIRatios ratios;
  auto* c_ratios = typeiii->add_subcommand("ratios", "ratio-set membership and pushforward histogram");
  c_ratios->add_option("--lambda", ratios.lambda, "lambda in (0,1)");
  c_ratios->add_option("--lambda-prime", ratios.lambda_prime, "lambda' in (lambda, 1)");
  c_ratios->add_option("--n", ratios.n, "generation");
  c_ratios->add_option("--samples", ratios.samples, "Monte Carlo draws");
  c_ratios->add_option("--seed", ratios.seed, "root seed");
  c_ratios->add_option("--out", ratios.out, "report path");
  c_ratios->add_option("--hist-out", ratios.hist_out, "log-RN histogram CSV path");
  c_ratios->add_option("--plot-out", ratios.plot_out, "pushforward histogram plot data path");
  c_ratios->callback([&] { action = [&] { return ratios.run(g); }; });

  auto* index = app.add_subcommand("index", "ergodic index classification");
  index->require_subcommand(1);
  IndexScan scan;
  auto* c_scan = index->add_subcommand("scan", "classify k-fold products of nu^c");
  c_scan->add_option("--c", scan.c, "c > 0");
  c_scan->add_option("--d-assumed", scan.d_assumed, "assumed critical D");
  c_scan->add_option("--kmax", scan.kmax, "largest k");
  c_scan->add_option("--K", scan.K, "dissipativity truncation");
  c_scan->add_option("--out", scan.out, "JSON summary path");
  c_scan->add_option("--csv-out", scan.csv_out, "classification CSV path");
  c_scan->add_option("--plot-out", scan.plot_out, "S(k, c) plot data path");
  c_scan->callback([&] { action = [&] { return scan.run(g); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (g.threads > 0) nsb::kernels::set_threads(g.threads);
    return action ? action() : 2;
  } catch (const nsb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const nsb::PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
