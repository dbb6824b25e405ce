#include "nsb/report.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "nsb/ergodic_index.hpp"

namespace nsb {
namespace {

TEST(MeasureSpec, Parse) {
  const auto iid = MeasureSpec::parse("iid:0.3");
  EXPECT_EQ(iid.family, "iid");
  EXPECT_DOUBLE_EQ(iid.build().mass(5, 0), 0.3);
  EXPECT_EQ(MeasureSpec::parse("iid:0.2,0.5,0.3").build().alphabet_size(), 3u);
  EXPECT_DOUBLE_EQ(MeasureSpec::parse("nu_c:0.1").build().mass(1, 0), 0.6);
  EXPECT_DOUBLE_EQ(MeasureSpec::parse("nu_c:c=0.1").build().mass(4, 0), 0.55);
  const auto mu = MeasureSpec::parse("mu_pc:p=0.3,c=0.4");
  EXPECT_EQ(mu.params.at("seq"), "inv_sqrt");
  EXPECT_NEAR(mu.build().mass(4, 0), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(MeasureSpec::parse("mu_pc:p=0.3,c=0.4,seq=zero").build().mass(4, 0), 0.3);
  const auto js = MeasureSpec::parse(R"({"family": "nu_c", "c": 0.25})");
  EXPECT_EQ(js.to_json(), (nlohmann::json{{"family", "nu_c"}, {"c", 0.25}}));
}

TEST(MeasureSpec, Errors) {
  EXPECT_THROW(MeasureSpec::parse("iid"), ConfigError);
  EXPECT_THROW(MeasureSpec::parse("iid:abc"), ConfigError);
  EXPECT_THROW(MeasureSpec::parse("poisson:1"), ConfigError);
  EXPECT_THROW(MeasureSpec::parse("mu_pc:p=0.3"), ConfigError);
  EXPECT_THROW(MeasureSpec::parse("mu_pc:p=0.3,c=1,seq=cubic"), ConfigError);
  EXPECT_THROW(MeasureSpec::parse("{not json"), ConfigError);
  EXPECT_THROW(MeasureSpec::parse("iid:0.5,0.6").build(), ConfigError);
  EXPECT_THROW(MeasureSpec::parse("nu_c:-1").build(), ConfigError);
}

TEST(Report, JsonShapeAndDeterminism) {
  Report r;
  r.command = "index scan";
  r.config = {{"c", 0.6}, {"d_assumed", 1.0}};
  r.add("index", 2, 0, true);
  r.artifacts.push_back("index_scan.csv");
  const auto j = r.to_json();
  EXPECT_EQ(j.at("schema"), kReportSchema);
  EXPECT_EQ(j.at("tool_version"), kToolVersion);
  EXPECT_EQ(j.at("metrics")[0].at("name"), "index");
  EXPECT_EQ(j.at("pass"), true);
  EXPECT_EQ(r.dump(), r.dump());
  EXPECT_EQ(r.dump().back(), '\n');
  r.add("bad", 1, 0, false);
  EXPECT_FALSE(r.all_pass());
}

TEST(PlotData, EmptyIsHeaderOnly) {
  std::ostringstream os;
  emit_plot_data(os, {});
  EXPECT_EQ(os.str(), "series,x,y\n");
}

TEST(PlotData, RoundTrip) {
  std::vector<PlotSeries> s{{"S_c0.3", {1, 2, 3}, {0.1, 1.0 / 3, -2e-300}},
                            {"tail", {0.5}, {std::nextafter(1.0, 2.0)}}};
  std::ostringstream os;
  emit_plot_data(os, s);
  std::istringstream is(os.str());
  EXPECT_EQ(parse_plot_data(is), s);
  EXPECT_THROW(emit_plot_data(os, {{"a,b", {1}, {2}}}), PreconditionError);
  std::istringstream bad("x,y\n");
  EXPECT_THROW(parse_plot_data(bad), ConfigError);
}

TEST(PlotData, HellingerSeries) {
  PlotSeries s{"S_c0.3", {}, {}};
  for (Index k = 1; k <= 100; ++k) {
    s.x.push_back(std::log(static_cast<double>(k)));
    s.y.push_back(hellinger_S(0.3, k, 10 * k));
  }
  std::ostringstream os;
  emit_plot_data(os, {s});
  const std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 101);
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(std::stod(format_double(1.0 / 3)), 1.0 / 3);
}

}  // namespace
}  // namespace nsb
