#include <gtest/gtest.h>

#include <regex>
#include <sstream>
#include <vector>

#include "nngdt/io.hpp"

namespace {

using namespace nngdt;

TEST(PointsFile, ParsesCommentsAndBlankLines) {
  std::istringstream in("# header\n0 0\n\n1.5 -2e3\n  3   4  \n");
  EXPECT_EQ(parse_points(in), (std::vector<Point>{{0, 0}, {1.5, -2000}, {3, 4}}));
}

TEST(PointsFile, ErrorsCiteLineNumbers) {
  std::istringstream a("0 0\n# c\n1 x\n");
  try {
    parse_points(a, "pts");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("pts:3"), std::string::npos);
  }
  std::istringstream b("0 0 0\n");
  EXPECT_THROW(parse_points(b), ParseError);
  std::istringstream c("nan 0\n");
  EXPECT_THROW(parse_points(c), ParseError);
  std::istringstream d("1\n");
  EXPECT_THROW(parse_points(d), ParseError);
}

TEST(PointsFile, RoundTripIsExact) {
  const auto pts = generate(Distribution::Clustered, 500, 3);
  std::istringstream in(format_points(pts));
  EXPECT_EQ(parse_points(in), pts);
}

TEST(TrianglesFile, ParseAndRange) {
  std::istringstream ok("0 1 2\n# x\n1 2 3\n");
  EXPECT_EQ(parse_triangles(ok, 4), (std::vector<IndexTriangle>{{0, 1, 2}, {1, 2, 3}}));
  std::istringstream bad("0 1 4\n");
  EXPECT_THROW(parse_triangles(bad, 4), ParseError);
  std::istringstream neg("0 -1 2\n");
  EXPECT_THROW(parse_triangles(neg, 4), ParseError);
  EXPECT_EQ(format_triangles(std::vector<IndexTriangle>{{0, 1, 2}, {1, 3, 2}}), "0 1 2\n1 3 2\n");
}

TEST(Generate, UniformInUnitSquareAndDeterministic) {
  const auto a = generate(Distribution::UniformSquare, 4, 1);
  ASSERT_EQ(a.size(), 4u);
  for (const Point& p : a) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LE(p.x, 1.0);
    EXPECT_GE(p.y, 0.0);
    EXPECT_LE(p.y, 1.0);
  }
  for (Distribution d : {Distribution::UniformSquare, Distribution::Clustered, Distribution::GridJitter}) {
    EXPECT_EQ(format_points(generate(d, 1000, 9)), format_points(generate(d, 1000, 9)));
    EXPECT_NE(format_points(generate(d, 1000, 9)), format_points(generate(d, 1000, 10)));
  }
  EXPECT_THROW(generate(Distribution::UniformSquare, 0, 1), std::invalid_argument);
  EXPECT_EQ(parse_distribution("grid-jitter"), Distribution::GridJitter);
  EXPECT_THROW(parse_distribution("gaussian"), std::invalid_argument);
}

TEST(Generate, GridJitterSpreadIsPolynomial) {
  // Cells of side 1/s keep jittered points at least 1/(2s) apart, so the
  // spread is below 2 * sqrt(2) * s, about 2.9 * sqrt(N).
  for (std::size_t n : {100u, 1000u, 10000u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SpreadReport r = compute_spread(generate(Distribution::GridJitter, n, seed));
      EXPECT_LE(r.spread, 1.0 * double(n) * double(n));
      EXPECT_LE(r.spread, 3.0 * std::sqrt(double(n)) + 3.0);
    }
  }
}

int count(const std::string& s, const std::string& needle) {
  int c = 0;
  for (std::size_t pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++c;
  return c;
}

TEST(Svg, EdgesDrawnOnce) {
  const std::vector<Point> tri{{0, 0}, {1, 0}, {0, 1}};
  EXPECT_EQ(count(render_svg(tri, std::vector<IndexTriangle>{{0, 1, 2}}), "<line"), 3);
  const std::vector<Point> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::string s = render_svg(sq, std::vector<IndexTriangle>{{0, 1, 2}, {0, 2, 3}});
  EXPECT_EQ(count(s, "<line"), 5);
  EXPECT_NE(s.find("viewBox=\"-0.05 -1.05 1.1 1.1\""), std::string::npos);
  EXPECT_EQ(s, render_svg(sq, std::vector<IndexTriangle>{{0, 1, 2}, {0, 2, 3}}));
}

TEST(CountersCsv, KeyedByRoundAndPhase) {
  const auto pts = generate(Distribution::UniformSquare, 3000, 2);
  const RunResult r = run(pts, {.seed = 2});
  const std::string csv = format_counters_csv(r.counters);
  EXPECT_EQ(csv.rfind("round,phase,calls,work\n", 0), 0u);
  EXPECT_EQ(count(csv, "\n"), 1 + 5 * int(r.plan.rounds()));
  for (const char* phase : {",nng-build,", ",history,", ",walk,", ",conflict,", ",insert,"}) {
    EXPECT_EQ(count(csv, phase), int(r.plan.rounds()));
  }
  EXPECT_EQ(csv, format_counters_csv(run(pts, {.seed = 2}).counters));
}

}  // namespace
