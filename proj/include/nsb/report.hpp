#pragma once

// Measure specs, run reports and plot-data CSV shared by the command-line tool
// and the acceptance suite.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsb/product_measure.hpp"

namespace nsb {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

/// A measure named on the command line or in a config file.
///
///   iid:0.3              i.i.d. with P(0) = 0.3
///   iid:0.2,0.5,0.3      i.i.d. on three symbols
///   nu_c:0.1  or  nu_c:c=0.1
///   mu_pc:p=0.3,c=0.4[,seq=inv_sqrt|zero]
///
/// JSON objects of the form {"family": ..., <params>} are accepted too.
struct MeasureSpec {
  std::string family;
  nlohmann::json params;  // canonical, echoed into reports

  static MeasureSpec parse(const std::string& text);
  static MeasureSpec from_json(const nlohmann::json& j);
  FiniteProductMeasure build() const;
  nlohmann::json to_json() const;
};

struct Metric {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct Report {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<Metric> metrics;
  std::vector<std::string> artifacts;
  nlohmann::json data = nlohmann::json::object();  // command-specific payload

  void add(std::string name, double value, double tolerance, bool pass) {
    metrics.push_back({std::move(name), value, tolerance, pass});
  }
  bool all_pass() const;
  nlohmann::json to_json() const;
  /// Pretty JSON with sorted keys and a trailing newline; identical bytes for
  /// identical content.
  std::string dump() const;
};

/// Record of a convergence diagnostic.
nlohmann::json series_record(const std::string& family, const nlohmann::json& params, Index k, Index N,
                             const SeriesDiagnostic& d);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  friend bool operator==(const PlotSeries&, const PlotSeries&) = default;
};

/// CSV with header "series,x,y"; numbers use the shortest round-trip form.
void emit_plot_data(std::ostream& os, const std::vector<PlotSeries>& series);
std::vector<PlotSeries> parse_plot_data(std::istream& is);

std::string format_double(double x);

}  // namespace nsb
