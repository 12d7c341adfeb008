#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "nngdt/oracle.hpp"

namespace {

using namespace nngdt;

std::vector<Point> uniform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> pts(n);
  for (Point& p : pts) p = {u(rng), u(rng)};
  return pts;
}

const std::vector<Point> kSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

TEST(BruteDelaunay, SmallCases) {
  const std::vector<Point> tri{{0, 0}, {1, 0}, {0, 1}};
  EXPECT_EQ(brute_delaunay(tri), (std::vector<IndexTriangle>{{0, 1, 2}}));

  const BruteDelaunayResult sq = brute_delaunay_detailed(kSquare);
  EXPECT_TRUE(sq.cocircular);
  EXPECT_EQ(sq.triangles.size(), 2u);
  EXPECT_TRUE(check_delaunay_property(kSquare, sq.triangles).passed());
  // Both diagonals pass the closed-disk test.
  EXPECT_TRUE(check_delaunay_property(kSquare, std::vector<IndexTriangle>{{0, 1, 2}, {0, 2, 3}}).passed());
  EXPECT_TRUE(check_delaunay_property(kSquare, std::vector<IndexTriangle>{{0, 1, 3}, {1, 2, 3}}).passed());
}

TEST(BruteDelaunay, Errors) {
  EXPECT_THROW(brute_delaunay(std::vector<Point>{{0, 0}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(brute_delaunay(std::vector<Point>{{0, 0}, {1, 1}, {2, 2}}), std::invalid_argument);
  EXPECT_THROW(brute_delaunay(std::vector<Point>{{0, 0}, {1, 1}, {0, 0}}), std::invalid_argument);
  EXPECT_THROW(brute_delaunay(uniform(kBruteDelaunayMaxPoints + 1, 1)), std::invalid_argument);
}

TEST(BruteDelaunay, OutputPassesCheckers) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pts = uniform(60, seed);
    const auto tris = brute_delaunay(pts);
    EXPECT_TRUE(check_delaunay_property(pts, tris).passed());
    EXPECT_TRUE(check_euler(pts, tris).passed());
  }
  std::vector<Point> grid;
  for (int x = 0; x < 6; ++x) {
    for (int y = 0; y < 6; ++y) grid.push_back({double(x), double(y)});
  }
  const auto tris = brute_delaunay(grid);
  EXPECT_TRUE(check_delaunay_property(grid, tris).passed());
  EXPECT_TRUE(check_euler(grid, tris).passed());
}

TEST(BruteNng, Examples) {
  EXPECT_EQ(brute_nng(std::vector<Point>{{0, 0}, {1, 0}, {5, 0}}).nn, (std::vector<std::uint32_t>{1, 0, 1}));
  EXPECT_EQ(brute_nng(std::vector<Point>{{0, 0}, {1, 0}, {-1, 0}}).nn[0], 1u);
  EXPECT_THROW(brute_nng(std::vector<Point>{{0, 0}, {0, 0}}), std::invalid_argument);
  EXPECT_THROW(brute_nng(std::vector<Point>{{0, 0}}), std::invalid_argument);
}

TEST(CheckDelaunay, WrongDiagonalGivesWitness) {
  const std::vector<Point> quad{{0, 0}, {2, 0}, {2.2, 1}, {0, 1.1}};
  const auto good = brute_delaunay(quad);
  ASSERT_TRUE(check_delaunay_property(quad, good).passed());
  // The other diagonal.
  std::vector<IndexTriangle> flipped;
  if (good[0] == IndexTriangle{0, 1, 2}) {
    flipped = {{0, 1, 3}, {1, 2, 3}};
  } else {
    flipped = {{0, 1, 2}, {0, 2, 3}};
  }
  const OracleReport r = check_delaunay_property(quad, flipped);
  ASSERT_FALSE(r.passed());
  EXPECT_EQ(r.violations[0].check, "empty-circle");
  EXPECT_NE(r.violations[0].witness.find("inside the circumcircle"), std::string::npos);
  EXPECT_FALSE(check_delaunay_property(quad, flipped, {.exhaustive = false}).passed());
}

TEST(CheckDelaunay, StructuralFailures) {
  const std::vector<Point> tri{{0, 0}, {1, 0}, {0, 1}, {0.2, 0.2}};
  // Missing the interior point.
  EXPECT_FALSE(check_delaunay_property(tri, std::vector<IndexTriangle>{{0, 1, 2}}).passed());
  // Clockwise triangle.
  EXPECT_FALSE(check_delaunay_property(kSquare, std::vector<IndexTriangle>{{0, 2, 1}, {0, 3, 2}}).passed());
  // Overlapping duplicate.
  EXPECT_FALSE(check_delaunay_property(kSquare, std::vector<IndexTriangle>{{0, 1, 2}, {0, 1, 2}, {0, 2, 3}}).passed());
  // Out of range.
  EXPECT_FALSE(check_delaunay_property(kSquare, std::vector<IndexTriangle>{{0, 1, 9}}).passed());
}

TEST(CheckEuler, Examples) {
  EXPECT_TRUE(check_euler(kSquare, std::vector<IndexTriangle>{{0, 1, 2}, {0, 2, 3}}).passed());
  const std::vector<Point> tri{{0, 0}, {1, 0}, {0, 1}, {0.2, 0.2}};
  EXPECT_TRUE(check_euler(tri, std::vector<IndexTriangle>{{0, 1, 3}, {1, 2, 3}, {2, 0, 3}}).passed());
  EXPECT_FALSE(check_euler(tri, std::vector<IndexTriangle>{{0, 1, 2}}).passed());
}

TEST(Hull, CollinearBoundaryPointsCount) {
  const std::vector<Point> pts{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}, {0, 1}};
  const auto h = hull_boundary(pts);
  EXPECT_EQ(h.size(), 6u);
  EXPECT_EQ(h, (std::vector<std::uint32_t>{0, 1, 2, 3, 4, 6}));
}

TEST(Hull, RandomHullIsConvexAndContainsAll) {
  const auto pts = uniform(500, 4);
  const auto h = hull_boundary(pts);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Point& a = pts[h[i]];
    const Point& b = pts[h[(i + 1) % h.size()]];
    for (const Point& p : pts) EXPECT_NE(orient2d(a, b, p), Sign::Negative);
  }
}

}  // namespace
