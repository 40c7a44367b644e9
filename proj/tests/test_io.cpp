#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include "mongeray/mongeray.hpp"

using namespace mongeray;

TEST(Presets, Names) {
  auto p = parse_preset("cor2.2");
  EXPECT_EQ(p.profile.exponent(), 0.5);
  EXPECT_TRUE(p.reflected);
  p = parse_preset("cor2.3");
  EXPECT_EQ(p.profile.exponent(), 1.0);
  EXPECT_FALSE(p.reflected);
  p = parse_preset("cor2.4");
  EXPECT_EQ(p.profile.exponent(), 1.0);
  EXPECT_TRUE(p.reflected);
  p = parse_preset("cor2.5:1");
  EXPECT_EQ(p.profile.exponent(), 2.0);
  EXPECT_TRUE(p.reflected);
  p = parse_preset("cor2.5:0.5");
  EXPECT_EQ(p.profile.exponent(), 4.0);
  EXPECT_EQ(parse_preset("rem2.7").profile.kind(), ProfileKind::exponential);
  EXPECT_EQ(parse_preset("exponential").profile.kind(), ProfileKind::exponential);
  EXPECT_EQ(parse_preset("power:0.25").profile.exponent(), 0.25);
}

TEST(Presets, Rejects) {
  EXPECT_THROW(parse_preset("cor9"), DomainError);
  EXPECT_THROW(parse_preset("power:"), DomainError);
  EXPECT_THROW(parse_preset("power:-1"), DomainError);
  EXPECT_THROW(parse_preset("power:1x"), DomainError);
  EXPECT_THROW(parse_preset("cor2.5:0"), DomainError);
}

TEST(Json, ProfileRoundTrip) {
  const auto j = to_json(RayProfile::power(0.5));
  EXPECT_EQ(j.dump(), R"({"kind":"power","s":0.5})");
  EXPECT_EQ(to_json(RayProfile::exponential()).dump(), R"({"kind":"exponential"})");
  EXPECT_EQ(profile_from_json(j).exponent(), 0.5);
  EXPECT_THROW(profile_from_json(json{{"kind", "cubic"}}), DomainError);
  EXPECT_THROW(profile_from_json(json{{"kind", "power"}}), DomainError);
}

TEST(Json, PairRoundTrip) {
  const auto pair = make_pair(parse_preset("cor2.4"));
  const auto j = to_json(pair);
  EXPECT_EQ(j["zeta_sup"], 26.0);
  EXPECT_EQ(j["reflected"], true);
  const auto back = pair_from_json(j);
  EXPECT_EQ(back.c(), pair.c());
  EXPECT_EQ(back.eta_sup(), pair.eta_sup());
  EXPECT_TRUE(back.reflected());
  auto bad = j;
  bad["c"] = 1.0;
  EXPECT_THROW(pair_from_json(bad), ConstructionError);
}

TEST(Csv, FullPrecision) {
  std::ostringstream os;
  CsvWriter w(os, {"a", "b"});
  const double v = 0.1 + 0.2;
  w.row({v, 1.0 / 3.0});
  std::istringstream in(os.str());
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_EQ(header, "a,b");
  const auto comma = line.find(',');
  EXPECT_EQ(std::strtod(line.substr(0, comma).c_str(), nullptr), v);
  EXPECT_EQ(std::strtod(line.substr(comma + 1).c_str(), nullptr), 1.0 / 3.0);
}

TEST(Csv, Tables) {
  const auto pair = make_pair(parse_preset("cor2.3"));
  std::ostringstream eta_csv, map_csv, pot_csv, probe_csv;
  const std::vector<double> ts{0.1, 0.5, 1.0};
  write_eta_csv(eta_csv, pair.eta_solution(), ts);
  EXPECT_EQ(eta_csv.str().substr(0, 6), "t,eta\n");
  const std::vector<Point> pts{{0.0, 0.125}, {0.5, 0.3}};
  write_map_csv(map_csv, TransportEvaluator(pair), pts);
  EXPECT_EQ(map_csv.str().substr(0, 13), "x1,x2,T1,T2,a");
  write_potential_csv(pot_csv, PotentialEvaluator(pair.profile()), pts);
  EXPECT_EQ(pot_csv.str().substr(0, 14), "x1,x2,u,b1,b2\n");
  const auto rep = bounds_report(pair, select_regularity_bounds(pair), geometric_grid(1e-4, 1e-2, 5));
  write_probe_csv(probe_csv, rep);
  std::string s = probe_csv.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 6);
}

TEST(Json, ReportsAreDeterministic) {
  const auto pair = make_pair(parse_preset("cor2.3"));
  auto dump = [&] {
    const auto rep = bounds_report(pair, select_regularity_bounds(pair), geometric_grid(1e-4, 1e-2, 5));
    return to_json(rep).dump();
  };
  EXPECT_EQ(dump(), dump());
  const auto j = json::parse(dump());
  for (const char* key : {"a_grid", "z_values", "ratio", "t_values", "fitted_exponent", "theoretical_exponent",
                          "lambda_star", "bounds_ok"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(Json, CheckResults) {
  const CheckResult r{"x", true, 1e-12, 1e-8, 3, "d"};
  const auto j = to_json(std::vector<CheckResult>{r});
  EXPECT_EQ(j[0]["name"], "x");
  EXPECT_EQ(j[0]["passed"], true);
  EXPECT_EQ(j[0]["samples"], 3);
}

TEST(Svg, RaysFigure) {
  const auto pair = make_pair(parse_preset("power:2"));
  std::ostringstream os;
  render_svg(os, pair, Figure::rays, 5);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("<svg", 0), 0u);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
  EXPECT_EQ(s.find("<script"), std::string::npos);
  std::size_t circles = 0;
  for (std::size_t pos = s.find("<circle"); pos != std::string::npos; pos = s.find("<circle", pos + 1)) ++circles;
  EXPECT_EQ(circles, 10u);
  std::ostringstream mirrored;
  render_svg(mirrored, pair.reflected_pair(), Figure::reflected, 5);
  circles = 0;
  const std::string m = mirrored.str();
  for (std::size_t pos = m.find("<circle"); pos != std::string::npos; pos = m.find("<circle", pos + 1)) ++circles;
  EXPECT_EQ(circles, 20u);
  EXPECT_THROW(parse_figure("bars"), DomainError);
}

TEST(Verify, SuitesOnSmallGrid) {
  const auto pair = make_pair(parse_preset("power:1"));
  EXPECT_TRUE(check_mass_balance(pair, {0.2, 0.7}).passed);
  for (const auto& r : check_closed_forms(pair, {0.2, 0.7})) EXPECT_TRUE(r.passed) << r.name;
  EXPECT_TRUE(check_density_floor(pair, 50).passed);
  EXPECT_THROW(parse_suite("everything"), DomainError);
  EXPECT_EQ(parse_suite("map"), Suite::map);
}
