#pragma once

// Brute-force oracles and structural checkers. They share the predicates
// with the construction but none of its data structures.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nngdt/geometry.hpp"
#include "nngdt/nng.hpp"

namespace nngdt {

using IndexTriangle = std::array<std::uint32_t, 3>;

inline constexpr std::size_t kBruteDelaunayMaxPoints = 250;
inline constexpr std::size_t kBruteNngMaxPoints = 5000;

struct Violation {
  std::string check;
  std::string witness;
};

struct OracleReport {
  std::vector<Violation> violations;

  bool passed() const { return violations.empty(); }
  void add(std::string check, std::string witness) { violations.push_back({std::move(check), std::move(witness)}); }
  void merge(const OracleReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }
};

/// Rotates so the smallest index comes first, keeping orientation.
inline IndexTriangle rotate_smallest_first(IndexTriangle t) {
  std::rotate(t.begin(), std::min_element(t.begin(), t.end()), t.end());
  return t;
}

namespace detail {

inline std::string describe(const IndexTriangle& t) {
  std::ostringstream s;
  s << "(" << t[0] << " " << t[1] << " " << t[2] << ")";
  return s.str();
}

inline bool proper_crossing(const Point& a, const Point& b, const Point& c, const Point& d) {
  const Sign o1 = orient2d(a, b, c);
  const Sign o2 = orient2d(a, b, d);
  const Sign o3 = orient2d(c, d, a);
  const Sign o4 = orient2d(c, d, b);
  return o1 != Sign::Zero && o2 == -o1 && o3 != Sign::Zero && o4 == -o3;
}

// Interiors of two CCW triangles intersect.
inline bool interiors_overlap(std::span<const Point> pts, const IndexTriangle& s, const IndexTriangle& t) {
  std::array<std::uint32_t, 3> ss = s;
  std::array<std::uint32_t, 3> tt = t;
  std::sort(ss.begin(), ss.end());
  std::sort(tt.begin(), tt.end());
  if (ss == tt) return true;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (proper_crossing(pts[s[i]], pts[s[(i + 1) % 3]], pts[t[j]], pts[t[(j + 1) % 3]])) return true;
    }
  }
  auto strictly_inside = [&](const IndexTriangle& tri, std::uint32_t p) {
    return point_in_triangle(pts[p], pts[tri[0]], pts[tri[1]], pts[tri[2]]).kind == Containment::Kind::Inside;
  };
  for (int i = 0; i < 3; ++i) {
    if (strictly_inside(t, s[i]) || strictly_inside(s, t[i])) return true;
  }
  return false;
}

inline void require_distinct(std::span<const Point> points) {
  std::vector<std::uint32_t> idx(points.size());
  for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    return points[a].x < points[b].x || (points[a].x == points[b].x && points[a].y < points[b].y);
  });
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (points[idx[i]] == points[idx[i - 1]]) throw std::invalid_argument("oracle: duplicate points");
  }
}

}  // namespace detail

struct BruteDelaunayResult {
  std::vector<IndexTriangle> triangles;
  /// Some empty circumcircle passes through a fourth point, so the
  /// triangulation is not unique.
  bool cocircular = false;
};

/// Every CCW triple whose open circumdisk is empty. Where four or more points
/// are cocircular the candidates overlap; they are then taken greedily in
/// lexicographic order, skipping any that overlaps an accepted one.
inline BruteDelaunayResult brute_delaunay_detailed(std::span<const Point> points) {
  const std::size_t n = points.size();
  if (n < 3) throw std::invalid_argument("brute_delaunay: needs at least three points");
  if (n > kBruteDelaunayMaxPoints) throw std::invalid_argument("brute_delaunay: too many points");
  detail::require_distinct(points);

  std::vector<IndexTriangle> candidates;
  std::vector<bool> degenerate;
  bool any_noncollinear = false;
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      for (std::uint32_t c = b + 1; c < n; ++c) {
        const Sign o = orient2d(points[a], points[b], points[c]);
        if (o == Sign::Zero) continue;
        any_noncollinear = true;
        const IndexTriangle t = o == Sign::Positive ? IndexTriangle{a, b, c} : IndexTriangle{a, c, b};
        bool empty = true;
        bool cocircular = false;
        for (std::uint32_t p = 0; p < n && empty; ++p) {
          if (p == a || p == b || p == c) continue;
          const Sign s = in_circle(points[t[0]], points[t[1]], points[t[2]], points[p]);
          if (s == Sign::Positive) empty = false;
          if (s == Sign::Zero) cocircular = true;
        }
        if (empty) {
          candidates.push_back(t);
          degenerate.push_back(cocircular);
        }
      }
    }
  }
  if (!any_noncollinear) throw std::invalid_argument("brute_delaunay: all points are collinear");

  BruteDelaunayResult result;
  std::vector<IndexTriangle>& out = result.triangles;
  std::vector<IndexTriangle> accepted_degenerate;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (degenerate[i]) {
      result.cocircular = true;
      bool overlaps = false;
      for (const IndexTriangle& a : accepted_degenerate) {
        if (detail::interiors_overlap(points, a, candidates[i])) {
          overlaps = true;
          break;
        }
      }
      if (overlaps) continue;
      accepted_degenerate.push_back(candidates[i]);
    }
    out.push_back(candidates[i]);
  }
  std::sort(out.begin(), out.end());
  return result;
}

inline std::vector<IndexTriangle> brute_delaunay(std::span<const Point> points) {
  return brute_delaunay_detailed(points).triangles;
}

/// All-pairs nearest neighbors under the (squared distance, index) order.
inline NngGraph brute_nng(std::span<const Point> points) {
  const std::size_t n = points.size();
  if (n < 2) throw std::invalid_argument("brute_nng: needs at least two points");
  if (n > kBruteNngMaxPoints) throw std::invalid_argument("brute_nng: too many points");
  NngGraph g;
  g.ids.resize(n);
  g.nn.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    g.ids[i] = point_id(i);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t arg = 0;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d2 = squared_distance(points[i], points[j]);
      if (d2 == 0.0) throw std::invalid_argument("brute_nng: duplicate points");
      if (d2 < best) {
        best = d2;
        arg = j;
      }
    }
    g.nn[i] = arg;
  }
  return g;
}

/// Points on the convex hull boundary, including those in the relative
/// interior of hull edges, in counter-clockwise order. Gift wrapping.
inline std::vector<std::uint32_t> hull_boundary(std::span<const Point> points) {
  const std::size_t n = points.size();
  if (n == 0) return {};
  std::uint32_t start = 0;
  for (std::uint32_t i = 1; i < n; ++i) {
    if (points[i].x < points[start].x || (points[i].x == points[start].x && points[i].y < points[start].y)) start = i;
  }
  auto farther = [&](std::uint32_t from, std::uint32_t a, std::uint32_t b) {
    return squared_distance(points[from], points[a]) > squared_distance(points[from], points[b]);
  };
  // Corners first; each next corner leaves every point on its left or on
  // the segment itself.
  std::vector<std::uint32_t> corners;
  std::uint32_t cur = start;
  do {
    corners.push_back(cur);
    std::uint32_t next = cur == 0 ? 1 : 0;
    if (n == 1) break;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (i == cur) continue;
      const Sign o = orient2d(points[cur], points[next], points[i]);
      if (o == Sign::Negative || (o == Sign::Zero && farther(cur, i, next))) next = i;
    }
    cur = next;
    if (corners.size() > n) throw std::logic_error("hull_boundary: wrapping did not close");
  } while (cur != start);

  if (corners.size() < 3) return corners;
  std::vector<std::uint32_t> out;
  for (std::size_t c = 0; c < corners.size(); ++c) {
    const std::uint32_t a = corners[c];
    const std::uint32_t b = corners[(c + 1) % corners.size()];
    std::vector<std::uint32_t> on_edge;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (i != a && i != b && orient2d(points[a], points[b], points[i]) == Sign::Zero &&
          strictly_between(points[a], points[b], points[i])) {
        on_edge.push_back(i);
      }
    }
    std::sort(on_edge.begin(), on_edge.end(),
              [&](std::uint32_t p, std::uint32_t q) { return farther(a, q, p); });
    out.push_back(a);
    out.insert(out.end(), on_edge.begin(), on_edge.end());
  }
  return out;
}

/// #triangles = 2n - 2 - h, with h counted on the independently computed hull.
inline OracleReport check_euler(std::span<const Point> points, std::span<const IndexTriangle> triangles) {
  OracleReport report;
  const std::size_t n = points.size();
  const std::size_t h = hull_boundary(points).size();
  const std::size_t expected = 2 * n >= 2 + h ? 2 * n - 2 - h : 0;
  if (triangles.size() != expected) {
    std::ostringstream w;
    w << "n=" << n << " h=" << h << " expected " << expected << " triangles, found " << triangles.size();
    report.add("euler", w.str());
  }
  return report;
}

struct DelaunayCheckOptions {
  /// Test every point against every circumcircle; otherwise only the
  /// vertices opposite each interior edge are tested, which suffices once
  /// the edge structure is a valid triangulation.
  bool exhaustive = true;
  std::size_t max_witnesses = 20;
};

/// (i) Empty open circumdisks; (ii) the triangles tile the convex hull:
/// every triangle is CCW, interior edges are shared by two oppositely
/// oriented triangles, the remaining edges are exactly the hull edges, and
/// every point is a vertex.
inline OracleReport check_delaunay_property(std::span<const Point> points, std::span<const IndexTriangle> triangles,
                                            const DelaunayCheckOptions& options = {}) {
  OracleReport report;
  const std::size_t n = points.size();
  auto full = [&] { return report.violations.size() >= options.max_witnesses; };

  for (const IndexTriangle& t : triangles) {
    for (std::uint32_t v : t) {
      if (v >= n) {
        report.add("index", detail::describe(t) + " references a point out of range");
        return report;
      }
    }
  }

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> directed;
  std::vector<bool> used(n, false);
  for (std::uint32_t i = 0; i < triangles.size(); ++i) {
    const IndexTriangle& t = triangles[i];
    if (orient2d(points[t[0]], points[t[1]], points[t[2]]) != Sign::Positive && !full()) {
      report.add("orientation", detail::describe(t) + " is not counter-clockwise");
    }
    for (int e = 0; e < 3; ++e) {
      used[t[e]] = true;
      const auto key = std::make_pair(t[e], t[(e + 1) % 3]);
      if (!directed.emplace(key, i).second && !full()) {
        report.add("edge", "directed edge " + std::to_string(key.first) + "->" + std::to_string(key.second) +
                               " appears twice");
      }
    }
  }
  for (std::uint32_t p = 0; p < n; ++p) {
    if (!used[p] && !full()) report.add("coverage", "point " + std::to_string(p) + " is not a vertex");
  }

  const std::vector<std::uint32_t> hull = hull_boundary(points);
  std::map<std::pair<std::uint32_t, std::uint32_t>, bool> hull_edges;
  for (std::size_t i = 0; i < hull.size(); ++i) hull_edges[{hull[i], hull[(i + 1) % hull.size()]}] = false;
  for (const auto& [edge, tri] : directed) {
    if (directed.count({edge.second, edge.first})) continue;
    auto it = hull_edges.find(edge);
    if (it == hull_edges.end()) {
      if (!full()) {
        report.add("boundary", "edge " + std::to_string(edge.first) + "->" + std::to_string(edge.second) +
                                   " of " + detail::describe(triangles[tri]) + " is unmatched but not a hull edge");
      }
    } else {
      it->second = true;
    }
  }
  for (const auto& [edge, seen] : hull_edges) {
    if (!seen && !full()) {
      report.add("boundary", "hull edge " + std::to_string(edge.first) + "->" + std::to_string(edge.second) +
                                 " is not covered");
    }
  }

  auto circle_witness = [&](const IndexTriangle& t, std::uint32_t p) {
    std::ostringstream w;
    w << "point " << p << " lies inside the circumcircle of " << detail::describe(t);
    report.add("empty-circle", w.str());
  };
  if (options.exhaustive) {
    for (const IndexTriangle& t : triangles) {
      if (orient2d(points[t[0]], points[t[1]], points[t[2]]) != Sign::Positive) continue;
      for (std::uint32_t p = 0; p < n && !full(); ++p) {
        if (p == t[0] || p == t[1] || p == t[2]) continue;
        if (in_circle(points[t[0]], points[t[1]], points[t[2]], points[p]) == Sign::Positive) circle_witness(t, p);
      }
    }
  } else {
    for (const auto& [edge, tri] : directed) {
      const auto twin = directed.find({edge.second, edge.first});
      if (twin == directed.end() || full()) continue;
      const IndexTriangle& t = triangles[tri];
      const IndexTriangle& u = triangles[twin->second];
      if (orient2d(points[t[0]], points[t[1]], points[t[2]]) != Sign::Positive) continue;
      for (std::uint32_t p : u) {
        if (p == edge.first || p == edge.second) continue;
        if (in_circle(points[t[0]], points[t[1]], points[t[2]], points[p]) == Sign::Positive) circle_witness(t, p);
      }
    }
  }
  return report;
}

}  // namespace nngdt
