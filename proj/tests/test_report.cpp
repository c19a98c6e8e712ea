#include <doctest.h>

#include <algorithm>

#include <json.hpp>

#include "quadmap/normalize.hpp"
#include "quadmap/report.hpp"
#include "quadmap/svg.hpp"

using namespace quadmap;
using nlohmann::json;

TEST_CASE("map spec parsing: numbers, rational strings, defaults") {
  const MapSpec s = parse_map_spec(R"({"a20": 1, "a02": "-1/2", "b11": 2.5, "label": "E2"})");
  CHECK(s.map.a20 == 1.0);
  CHECK(s.map.a02 == -0.5);
  CHECK(s.map.b11 == 2.5);
  CHECK(s.map.b00 == 0.0);
  CHECK(s.exact_map.a02 == Rational(-1, 2));
  REQUIRE(s.label_hint.has_value());
  CHECK(*s.label_hint == "E2");
}

TEST_CASE("map spec parsing rejects bad input") {
  CHECK_THROWS_AS(parse_map_spec("not json"), spec_parse_error);
  CHECK_THROWS_AS(parse_map_spec("[1,2,3]"), spec_parse_error);
  CHECK_THROWS_AS(parse_map_spec(R"({"a99": 1})"), spec_parse_error);
  CHECK_THROWS_AS(parse_map_spec(R"({"a20": "1/0"})"), spec_parse_error);
  CHECK_THROWS_AS(parse_map_spec(R"({"a20": true})"), spec_parse_error);
  CHECK_THROWS_AS(parse_map_spec(R"({"mode": "fancy"})"), spec_parse_error);
}

TEST_CASE("map spec serialization round-trips") {
  const QuadraticMap q = normal_form(ClassLabel::H2);
  const MapSpec s = parse_map_spec(map_spec_json(q));
  CHECK(max_coeff_deviation(s.map, q) == 0);
}

TEST_CASE("classification report is valid JSON and round-trips") {
  MapSpec spec = parse_map_spec(map_spec_json(normal_form(ClassLabel::E1)));
  ReportOptions opt;
  opt.exact = true;
  opt.profile_targets = 200;
  const std::string text = make_report_json(spec, opt);
  const json rep = json::parse(text);
  CHECK(rep.at("label") == "E1");
  CHECK(rep.at("residual").get<double>() <= 1e-12);
  CHECK(rep.at("profile_matches_class") == true);
  CHECK(rep.at("jacobian_conic").at("tag") == "ellipse");
  CHECK(rep.at("jacobian_conic").at("tag_exact") == "ellipse");
  // serialize -> parse -> serialize is the identity
  CHECK(json::parse(rep.dump(2)) == rep);
  // the echoed input parses back to the same map
  CHECK(max_coeff_deviation(parse_map_spec(rep.at("input").dump()).map,
                            normal_form(ClassLabel::E1)) == 0);
}

TEST_CASE("report includes the quadratic inverse for DP1") {
  MapSpec spec = parse_map_spec(map_spec_json(normal_form(ClassLabel::DP1)));
  const json rep = json::parse(make_report_json(spec, {}));
  REQUIRE(rep.contains("quadratic_inverse"));
  const QuadraticMap qi = parse_map_spec(rep.at("quadratic_inverse").dump()).map;
  const Vec2 r = evaluate(qi, evaluate(normal_form(ClassLabel::DP1), {0.3, -0.7}));
  CHECK(r.x == doctest::Approx(0.3));
  CHECK(r.y == doctest::Approx(-0.7));
}

TEST_CASE("scan covers a family crossing class boundaries") {
  // base (x^2 - s y^2 + x, xy + t): dir1 bends a02, dir2 shifts b00
  QuadraticMap base = normal_form(ClassLabel::E1);
  QuadraticMap d1, d2;
  d1.a02 = 1;
  d2.b00 = 1;
  const ScanResult r = run_scan(base, d1, d2, -2, 2, 9, -1, 1, 3, 2);
  CHECK(r.n1 == 9);
  CHECK(r.n2 == 3);
  CHECK(r.labels.size() == 27);
  // a02 = -1 + s: s < 1 elliptic, s > 1 hyperbolic (b00 shift never matters)
  for (int j = 0; j < 3; ++j) {
    CHECK(r.labels[j * 9 + 0] == "E1");  // s = -2 -> a02 = -3
    CHECK(r.labels[j * 9 + 8] == "H1");  // s = 2 -> a02 = 1
  }
  const std::string csv = scan_csv(r);
  CHECK(csv.rfind("s1,s2,label\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 28);
}

TEST_CASE("scan rejects degenerate directions") {
  QuadraticMap base = normal_form(ClassLabel::E1), d1, d2;
  CHECK_THROWS_AS(run_scan(base, d1, d2, 0, 1, 2, 0, 1, 2), std::invalid_argument);
  d1.a20 = 1;
  d2.a20 = 2;  // parallel
  CHECK_THROWS_AS(run_scan(base, d1, d2, 0, 1, 2, 0, 1, 2), std::invalid_argument);
}

TEST_CASE("svg writers produce well-formed documents") {
  const std::string p = plot_svg(normal_form(ClassLabel::E1), {0, 0}, 2.0, 200, 1);
  CHECK(p.rfind("<svg", 0) == 0);
  CHECK(p.find("stroke=\"red\"") != std::string::npos);
  CHECK(p.find("</svg>") != std::string::npos);

  QuadraticMap d1, d2;
  d1.a02 = 1;
  d2.b00 = 1;
  const ScanResult r = run_scan(normal_form(ClassLabel::E1), d1, d2, -2, 2, 5, -1, 1, 2, 1);
  const std::string s = scan_svg(r);
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') > 10);
}

TEST_CASE("plot of the same seed is deterministic") {
  const std::string a = plot_svg(normal_form(ClassLabel::H1), {0, 0}, 1.5, 100, 7);
  const std::string b = plot_svg(normal_form(ClassLabel::H1), {0, 0}, 1.5, 100, 7);
  CHECK(a == b);
}
