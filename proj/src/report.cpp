#include "nsb/report.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace nsb {

namespace {

double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError("bad number for " + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

MeasureSpec MeasureSpec::parse(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("measure spec: ") + e.what());
    }
    return from_json(j);
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("measure spec needs 'family:params': '" + text + "'");
  MeasureSpec m;
  m.family = text.substr(0, colon);
  const auto args = split(text.substr(colon + 1), ',');
  nlohmann::json j = {{"family", m.family}};
  if (m.family == "iid") {
    std::vector<double> probs;
    for (const auto& a : args) probs.push_back(parse_number(a, "iid"));
    if (probs.size() == 1) probs.push_back(1.0 - probs[0]);
    j["p"] = probs;
  } else if (m.family == "nu_c") {
    for (const auto& a : args) {
      const auto eq = a.find('=');
      const std::string key = eq == std::string::npos ? "c" : a.substr(0, eq);
      const std::string val = eq == std::string::npos ? a : a.substr(eq + 1);
      if (key != "c") throw ConfigError("nu_c takes only c");
      j["c"] = parse_number(val, "c");
    }
  } else if (m.family == "mu_pc") {
    for (const auto& a : args) {
      const auto eq = a.find('=');
      if (eq == std::string::npos) throw ConfigError("mu_pc parameters are key=value");
      const std::string key = a.substr(0, eq), val = a.substr(eq + 1);
      if (key == "seq") {
        j["seq"] = val;
      } else if (key == "p" || key == "c") {
        j[key] = parse_number(val, key);
      } else {
        throw ConfigError("mu_pc: unknown parameter '" + key + "'");
      }
    }
  } else {
    throw ConfigError("unknown measure family '" + m.family + "'");
  }
  return from_json(j);
}

MeasureSpec MeasureSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family")) throw ConfigError("measure spec object needs 'family'");
  MeasureSpec m;
  m.family = j.at("family").get<std::string>();
  m.params = nlohmann::json::object();
  try {
    if (m.family == "iid") {
      auto probs = j.at("p");
      if (probs.is_number()) probs = nlohmann::json::array({probs.get<double>(), 1.0 - probs.get<double>()});
      m.params["p"] = probs.get<std::vector<double>>();
    } else if (m.family == "nu_c") {
      m.params["c"] = j.at("c").get<double>();
    } else if (m.family == "mu_pc") {
      m.params["p"] = j.at("p").get<double>();
      m.params["c"] = j.at("c").get<double>();
      m.params["seq"] = j.value("seq", std::string("inv_sqrt"));
      const auto seq = m.params["seq"].get<std::string>();
      if (seq != "inv_sqrt" && seq != "zero") throw ConfigError("mu_pc: unknown seq '" + seq + "'");
    } else {
      throw ConfigError("unknown measure family '" + m.family + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("measure spec '" + m.family + "': " + e.what());
  }
  return m;
}

FiniteProductMeasure MeasureSpec::build() const {
  try {
    if (family == "iid") return make_iid(params.at("p").get<std::vector<double>>());
    if (family == "nu_c") return make_nu_c(params.at("c").get<double>());
    if (family == "mu_pc") {
      const double p = params.at("p").get<double>();
      const auto seq = params.at("seq").get<std::string>();
      return make_mu_pc(seq == "zero" ? zero_sequence(p) : inverse_sqrt_sequence(p), params.at("c").get<double>());
    }
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown measure family '" + family + "'");
}

nlohmann::json MeasureSpec::to_json() const {
  nlohmann::json j = params;
  j["family"] = family;
  return j;
}

bool Report::all_pass() const {
  return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.pass; });
}

nlohmann::json Report::to_json() const {
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& m : metrics) {
    ms.push_back({{"name", m.name}, {"value", m.value}, {"tolerance", m.tolerance}, {"pass", m.pass}});
  }
  return {{"schema", kReportSchema},
          {"tool_version", kToolVersion},
          {"command", command},
          {"config", config},
          {"metrics", ms},
          {"artifacts", artifacts},
          {"data", data},
          {"pass", all_pass()}};
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

nlohmann::json series_record(const std::string& family, const nlohmann::json& params, Index k, Index N,
                             const SeriesDiagnostic& d) {
  return {{"family", family}, {"params", params}, {"k", k}, {"N", N},
          {"value", d.value}, {"tail_increment", d.tail_increment}};
}

void emit_plot_data(std::ostream& os, const std::vector<PlotSeries>& series) {
  os << "series,x,y\n";
  for (const auto& s : series) {
    if (s.name.find_first_of(",\n\"") != std::string::npos) {
      throw PreconditionError("emit_plot_data: series names may not contain ',', '\"' or newlines");
    }
    if (s.x.size() != s.y.size()) throw PreconditionError("emit_plot_data: x and y lengths differ");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      os << s.name << ',' << format_double(s.x[i]) << ',' << format_double(s.y[i]) << '\n';
    }
  }
}

std::vector<PlotSeries> parse_plot_data(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "series,x,y") throw ConfigError("plot data: missing header");
  std::vector<PlotSeries> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 3) throw ConfigError("plot data: bad row '" + line + "'");
    if (out.empty() || out.back().name != parts[0]) out.push_back({parts[0], {}, {}});
    out.back().x.push_back(parse_number(parts[1], "x"));
    out.back().y.push_back(parse_number(parts[2], "y"));
  }
  return out;
}

}  // namespace nsb
