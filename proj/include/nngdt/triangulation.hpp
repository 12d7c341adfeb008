#pragma once

// Incremental planar Delaunay triangulation with a history DAG.
//
// Triangles are never deleted: a triangle killed by an insertion keeps its
// vertices, its neighbors as they were at the moment of death, and links to
// the triangles that replaced it along its cavity-boundary edges. Together
// with creation/death timestamps (counted in inserted points) this lets a
// point be located at any past time, and round-boundary snapshots keep the
// adjacency needed to walk in past triangulations.
//
// The convex hull is closed by one symbolic vertex at infinity. An infinite
// triangle is stored as (u, v, inf) with the outside of the hull on the left
// of u->v; a point conflicts with it when it lies strictly beyond the hull
// edge or in the open segment (u, v).

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nngdt/geometry.hpp"

namespace nngdt {

using TriangleId = std::uint32_t;

inline constexpr TriangleId kNoTriangle = 0xFFFFFFFFu;
inline constexpr PointId kInfiniteVertex = point_id(0xFFFFFFFFu);
inline constexpr std::uint32_t kAlive = 0xFFFFFFFFu;

using TriangleVertices = std::array<PointId, 3>;

class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DuplicatePointError : public std::invalid_argument {
 public:
  explicit DuplicatePointError(PointId existing)
      : std::invalid_argument("duplicate of point " + std::to_string(index_of(existing))), existing_(existing) {}
  PointId existing() const { return existing_; }

 private:
  PointId existing_;
};

struct HistoryTriangle {
  TriangleVertices v{};
  /// nbr[i] lies across the edge opposite v[i].
  std::array<TriangleId, 3> nbr{kNoTriangle, kNoTriangle, kNoTriangle};
  std::uint32_t created_at = 0;
  std::uint32_t died_at = kAlive;
  std::array<TriangleId, 3> children{kNoTriangle, kNoTriangle, kNoTriangle};
  std::uint8_t child_count = 0;

  bool is_infinite() const { return v[2] == kInfiniteVertex; }
  bool is_alive() const { return died_at == kAlive; }
  bool alive_at(std::uint32_t time) const { return created_at <= time && time < died_at; }
  std::span<const TriangleId> child_span() const { return {children.data(), child_count}; }

  int vertex_index(PointId p) const {
    for (int i = 0; i < 3; ++i) {
      if (v[i] == p) return i;
    }
    return -1;
  }
  int neighbor_index(TriangleId t) const {
    for (int i = 0; i < 3; ++i) {
      if (nbr[i] == t) return i;
    }
    return -1;
  }
};

/// Work tallies; all fields only ever grow.
struct WorkCounters {
  std::uint64_t history_descents = 0;
  std::uint64_t history_visits = 0;
  std::uint64_t conflict_tests = 0;
  std::uint64_t containment_searches = 0;
  std::uint64_t walks = 0;
  std::uint64_t walk_steps = 0;
  std::uint64_t insertions = 0;
  std::uint64_t cavity_triangles = 0;
  std::uint64_t walk_conflict_checks = 0;
  std::uint64_t walk_conflict_violations = 0;
  std::uint64_t euler_violations = 0;

  std::uint64_t location_work() const { return history_visits + walk_steps + conflict_tests; }
};

/// Frozen triangulation at a round boundary.
struct Snapshot {
  std::uint32_t round = 0;
  /// Number of inserted points.
  std::uint32_t time = 0;
  std::vector<TriangleId> alive;
  /// Indexed by triangle id; rows of triangles not alive at `time` hold kNoTriangle.
  std::vector<std::array<TriangleId, 3>> neighbor_table;
  /// incident[p] is an alive triangle having p as a vertex.
  std::vector<TriangleId> incident;

  bool contains(TriangleId t) const { return t < neighbor_table.size() && neighbor_table[t][0] != kNoTriangle; }
  const std::array<TriangleId, 3>& neighbors(TriangleId t) const { return neighbor_table[t]; }
};

/// Where a walk starts: a located point inside (or on) a triangle, or a
/// vertex of the snapshot.
struct LocatedPoint {
  Point at;
  TriangleId triangle = kNoTriangle;
};
using WalkStart = std::variant<LocatedPoint, PointId>;

struct WalkResult {
  TriangleId triangle = kNoTriangle;
  std::uint32_t steps = 0;
};

/// Insertion order with the first non-collinear triple moved to the front:
/// points 0 and 1, then the first k with orient(p0, p1, pk) != 0, then the
/// remaining points in their original order. Input must be duplicate-free.
inline std::vector<std::uint32_t> bootstrap_order(std::span<const Point> points) {
  if (points.size() < 3) throw DegenerateInputError("need at least three distinct points");
  if (points[0] == points[1]) throw DuplicatePointError(point_id(0));
  std::size_t k = 2;
  while (k < points.size() && orient2d(points[0], points[1], points[k]) == Sign::Zero) ++k;
  if (k == points.size()) throw DegenerateInputError("all points are collinear");
  std::vector<std::uint32_t> order{0, 1, static_cast<std::uint32_t>(k)};
  order.reserve(points.size());
  for (std::size_t i = 2; i < points.size(); ++i) {
    if (i != k) order.push_back(static_cast<std::uint32_t>(i));
  }
  return order;
}

class Triangulation {
 public:
  /// `points` are in insertion order; the first three must be non-collinear
  /// (see bootstrap_order) and become the initial triangle.
  explicit Triangulation(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.size() < 3) throw DegenerateInputError("need at least three points");
    for (const Point& p : points_) {
      if (!is_finite(p)) throw std::invalid_argument("non-finite coordinate");
    }
    bootstrap();
  }

  std::uint32_t clock() const { return clock_; }
  std::size_t point_count() const { return points_.size(); }
  std::span<const Point> points() const { return points_; }
  const Point& point(PointId p) const { return points_[index_of(p)]; }
  const HistoryTriangle& triangle(TriangleId t) const { return tris_[t]; }
  std::size_t triangle_count() const { return tris_.size(); }
  std::span<const TriangleId> roots() const { return roots_; }
  std::size_t finite_alive() const { return finite_alive_; }
  /// Number of hull edges, which equals the number of hull vertices.
  std::size_t hull_size() const { return infinite_alive_; }
  const WorkCounters& counters() const { return counters_; }
  WorkCounters& counters() { return counters_; }

  bool euler_holds() const { return finite_alive_ + 2 + infinite_alive_ == 2 * std::size_t{clock_}; }

  /// Conflict of p with t: strictly inside the circumcircle for finite
  /// triangles (cocircular is not a conflict).
  bool conflict(TriangleId t, const Point& p) const {
    const HistoryTriangle& tr = tris_[t];
    const Point& a = point(tr.v[0]);
    const Point& b = point(tr.v[1]);
    if (!tr.is_infinite()) return detail::incircle(a, b, point(tr.v[2]), p) == Sign::Positive;
    const Sign o = orient2d(a, b, p);
    return o == Sign::Positive || (o == Sign::Zero && strictly_between(a, b, p));
  }

  /// Descends the history from `start` (which must conflict with p) to a
  /// triangle alive at `target_time` that conflicts with p.
  TriangleId history_locate_conflict(const Point& p, TriangleId start, std::uint32_t target_time) {
    if (tris_[start].created_at > target_time) {
      throw std::invalid_argument("history_locate_conflict: start created after target time");
    }
    if (!counted_conflict(start, p)) {
      throw std::invalid_argument("history_locate_conflict: start triangle does not conflict");
    }
    ++counters_.history_descents;
    TriangleId t = start;
    for (;;) {
      ++counters_.history_visits;
      if (tris_[t].died_at > target_time) return t;
      TriangleId next = conflicting_child(t, p);
      if (next == kNoTriangle) next = conflicting_child_in_cavity(t, p);
      if (next == kNoTriangle) {
        const PointId killer = point_id(tris_[t].died_at - 1);
        if (point(killer) == p) throw DuplicatePointError(killer);
        throw std::logic_error("history_locate_conflict: no conflicting replacement");
      }
      t = next;
    }
  }

  /// History descent from the initial triangles.
  TriangleId locate_conflict_from_roots(const Point& p, std::uint32_t target_time) {
    for (TriangleId r : roots_) {
      if (counted_conflict(r, p)) return history_locate_conflict(p, r, target_time);
    }
    for (TriangleId r : roots_) {
      for (PointId v : tris_[r].v) {
        if (v != kInfiniteVertex && point(v) == p) throw DuplicatePointError(v);
      }
    }
    throw std::logic_error("locate_conflict_from_roots: no conflicting root");
  }

  /// Searches the conflict region of p around t (alive in `view`) for the
  /// triangle containing p. A point on an edge resolves to the lower-indexed
  /// finite triangle; a point outside the hull resolves to an infinite
  /// triangle whose hull edge it lies strictly beyond.
  template <class View>
  TriangleId conflict_to_containing(const Point& p, TriangleId t, const View& view) {
    ++counters_.containment_searches;
    const std::uint32_t stamp = next_stamp();
    std::vector<TriangleId>& queue = scratch_queue_;
    queue.clear();
    queue.push_back(t);
    mark_[t] = stamp;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const TriangleId c = queue[head];
      const TriangleId found = containing_or_none(c, p, view.neighbors(c));
      if (found != kNoTriangle) return found;
      for (TriangleId n : view.neighbors(c)) {
        if (mark_[n] == stamp) continue;
        mark_[n] = stamp;
        if (counted_conflict(n, p)) queue.push_back(n);
      }
    }
    throw std::logic_error("conflict_to_containing: containing triangle not in conflict region");
  }

  /// Straight-line walk in `snap` from the start to q. When `check_conflicts`
  /// is set, every finite triangle whose interior the segment crosses (other
  /// than those at a start vertex) is tested for conflict with the source or
  /// with q, and failures are tallied in walk_conflict_violations.
  WalkResult walk_locate(const Snapshot& snap, const WalkStart& start, const Point& q, bool check_conflicts = false) {
    ++counters_.walks;
    Walker w{*this, snap, q, check_conflicts};
    WalkResult r;
    if (const auto* v = std::get_if<PointId>(&start)) {
      w.source = point(*v);
      r.triangle = w.pivot(*v, true);
    } else {
      const auto& lp = std::get<LocatedPoint>(start);
      w.source = lp.at;
      r.triangle = w.from_triangle(lp.triangle);
    }
    r.steps = w.steps;
    counters_.walk_steps += w.steps;
    return r;
  }

  /// Inserts point `id` (which must equal clock()) starting the history
  /// descent at `hint`, a triangle in conflict with it.
  void insert(PointId id, TriangleId hint) {
    if (index_of(id) != clock_ || clock_ >= points_.size()) {
      throw std::invalid_argument("insert: points must be inserted in id order");
    }
    const Point& p = point(id);
    const TriangleId t0 = history_locate_conflict(p, hint, clock_);
    insert_at(id, t0);
  }

  /// Inserts point `id` locating it from the history roots.
  void insert(PointId id) {
    if (index_of(id) != clock_ || clock_ >= points_.size()) {
      throw std::invalid_argument("insert: points must be inserted in id order");
    }
    insert_at(id, locate_conflict_from_roots(point(id), clock_));
  }

  Snapshot take_snapshot(std::uint32_t round) const {
    Snapshot s;
    s.round = round;
    s.time = clock_;
    s.neighbor_table.assign(tris_.size(), {kNoTriangle, kNoTriangle, kNoTriangle});
    s.incident.assign(clock_, kNoTriangle);
    for (TriangleId t = 0; t < tris_.size(); ++t) {
      const HistoryTriangle& tr = tris_[t];
      if (!tr.is_alive()) continue;
      s.alive.push_back(t);
      s.neighbor_table[t] = tr.nbr;
      for (PointId v : tr.v) {
        if (v != kInfiniteVertex) s.incident[index_of(v)] = t;
      }
    }
    return s;
  }

  /// Current adjacency, usable wherever a Snapshot-like view is expected.
  struct LiveView {
    const Triangulation* tri;
    const std::array<TriangleId, 3>& neighbors(TriangleId t) const { return tri->tris_[t].nbr; }
  };
  LiveView live_view() const { return LiveView{this}; }

  std::vector<TriangleId> alive_triangles() const {
    std::vector<TriangleId> out;
    for (TriangleId t = 0; t < tris_.size(); ++t) {
      if (tris_[t].is_alive()) out.push_back(t);
    }
    return out;
  }

  /// Finite alive triangles, each rotated so its smallest id comes first,
  /// sorted lexicographically.
  std::vector<TriangleVertices> triangles() const {
    std::vector<TriangleVertices> out;
    out.reserve(finite_alive_);
    for (const HistoryTriangle& tr : tris_) {
      if (tr.is_alive() && !tr.is_infinite()) out.push_back(canonical(tr.v));
    }
    std::sort(out.begin(), out.end(), [](const TriangleVertices& a, const TriangleVertices& b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                          [](PointId x, PointId y) { return index_of(x) < index_of(y); });
    });
    return out;
  }

  static TriangleVertices canonical(TriangleVertices v) {
    int m = 0;
    for (int i = 1; i < 3; ++i) {
      if (index_of(v[i]) < index_of(v[m])) m = i;
    }
    return {v[m], v[(m + 1) % 3], v[(m + 2) % 3]};
  }

 private:
  void bootstrap() {
    const PointId a = point_id(0);
    PointId b = point_id(1);
    PointId c = point_id(2);
    const Sign o = orient2d(point(a), point(b), point(c));
    if (o == Sign::Zero) throw DegenerateInputError("bootstrap triple is collinear");
    if (o == Sign::Negative) std::swap(b, c);

    auto add = [&](TriangleVertices v) {
      HistoryTriangle t;
      t.v = v;
      t.created_at = 3;
      tris_.push_back(t);
    };
    add({a, b, c});
    add({b, a, kInfiniteVertex});
    add({c, b, kInfiniteVertex});
    add({a, c, kInfiniteVertex});
    // Pair up shared edges by brute force.
    for (TriangleId s = 0; s < 4; ++s) {
      for (int i = 0; i < 3; ++i) {
        const PointId e0 = tris_[s].v[(i + 1) % 3];
        const PointId e1 = tris_[s].v[(i + 2) % 3];
        for (TriangleId t = 0; t < 4; ++t) {
          if (t == s) continue;
          const int j0 = tris_[t].vertex_index(e1);
          if (j0 >= 0 && tris_[t].v[(j0 + 1) % 3] == e0) tris_[s].nbr[i] = t;
        }
      }
    }
    roots_ = {0, 1, 2, 3};
    clock_ = 3;
    finite_alive_ = 1;
    infinite_alive_ = 3;
    mark_.assign(tris_.size(), 0);
  }

  bool counted_conflict(TriangleId t, const Point& p) {
    ++counters_.conflict_tests;
    return conflict(t, p);
  }

  TriangleId conflicting_child(TriangleId t, const Point& p) {
    for (TriangleId c : tris_[t].child_span()) {
      if (counted_conflict(c, p)) return c;
    }
    return kNoTriangle;
  }

  // Triangles killed by the same insertion form a connected cavity; when no
  // child of t conflicts, one of the children of a sibling does. Conflicting
  // siblings are searched first, then the whole cavity.
  TriangleId conflicting_child_in_cavity(TriangleId t, const Point& p) {
    const std::uint32_t died = tris_[t].died_at;
    for (bool conflicting_only : {true, false}) {
      const std::uint32_t stamp = next_stamp();
      std::vector<TriangleId>& queue = scratch_queue_;
      queue.clear();
      queue.push_back(t);
      mark_[t] = stamp;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const TriangleId c = queue[head];
        if (c != t) {
          ++counters_.history_visits;
          const TriangleId found = conflicting_child(c, p);
          if (found != kNoTriangle) return found;
        }
        for (TriangleId n : tris_[c].nbr) {
          if (mark_[n] == stamp || tris_[n].died_at != died) continue;
          mark_[n] = stamp;
          if (!conflicting_only || counted_conflict(n, p)) queue.push_back(n);
        }
      }
    }
    return kNoTriangle;
  }

  template <class Neighbors>
  TriangleId containing_or_none(TriangleId c, const Point& p, const Neighbors& nbr) const {
    const HistoryTriangle& tr = tris_[c];
    if (tr.is_infinite()) {
      return orient2d(point(tr.v[0]), point(tr.v[1]), p) == Sign::Positive ? c : kNoTriangle;
    }
    const Containment ct = point_in_triangle(p, point(tr.v[0]), point(tr.v[1]), point(tr.v[2]));
    switch (ct.kind) {
      case Containment::Kind::Inside:
        return c;
      case Containment::Kind::OnEdge: {
        const TriangleId other = nbr[(ct.which + 2) % 3];
        if (tris_[other].is_infinite()) return c;
        return std::min(c, other);
      }
      case Containment::Kind::AtVertex:
        throw DuplicatePointError(tr.v[ct.which]);
      case Containment::Kind::Outside:
        break;
    }
    return kNoTriangle;
  }

  struct BoundaryEdge {
    TriangleId dead;
    TriangleId outside;
    PointId from;
    PointId to;
    TriangleId created;
  };

  void insert_at(PointId id, TriangleId t0) {
    const Point& p = point(id);
    const std::uint32_t now = clock_ + 1;
    const std::uint32_t stamp_in = next_stamp();
    const std::uint32_t stamp_out = next_stamp();

    std::vector<TriangleId>& cavity = scratch_cavity_;
    cavity.clear();
    cavity.push_back(t0);
    mark_[t0] = stamp_in;
    for (std::size_t head = 0; head < cavity.size(); ++head) {
      for (TriangleId n : tris_[cavity[head]].nbr) {
        if (mark_[n] == stamp_in || mark_[n] == stamp_out) continue;
        if (conflict(n, p)) {
          mark_[n] = stamp_in;
          cavity.push_back(n);
        } else {
          mark_[n] = stamp_out;
        }
      }
    }

    std::vector<BoundaryEdge>& boundary = scratch_boundary_;
    boundary.clear();
    for (TriangleId t : cavity) {
      const HistoryTriangle& tr = tris_[t];
      for (int i = 0; i < 3; ++i) {
        if (mark_[tr.nbr[i]] == stamp_in) continue;
        boundary.push_back({t, tr.nbr[i], tr.v[(i + 1) % 3], tr.v[(i + 2) % 3], kNoTriangle});
      }
    }

    const auto first_new = static_cast<TriangleId>(tris_.size());
    for (std::size_t k = 0; k < boundary.size(); ++k) boundary[k].created = first_new + static_cast<TriangleId>(k);
    // Each boundary vertex starts exactly one boundary edge.
    std::vector<std::pair<std::uint32_t, TriangleId>>& by_start = scratch_by_start_;
    by_start.clear();
    for (const BoundaryEdge& e : boundary) by_start.push_back({index_of(e.from), e.created});
    std::sort(by_start.begin(), by_start.end());
    auto starting_at = [&](PointId v) {
      auto it = std::lower_bound(by_start.begin(), by_start.end(), std::pair{index_of(v), TriangleId{0}});
      return it->second;
    };
    std::vector<std::pair<std::uint32_t, TriangleId>>& by_end = scratch_by_end_;
    by_end.clear();
    for (const BoundaryEdge& e : boundary) by_end.push_back({index_of(e.to), e.created});
    std::sort(by_end.begin(), by_end.end());
    auto ending_at = [&](PointId v) {
      auto it = std::lower_bound(by_end.begin(), by_end.end(), std::pair{index_of(v), TriangleId{0}});
      return it->second;
    };

    for (const BoundaryEdge& e : boundary) {
      HistoryTriangle nt;
      nt.created_at = now;
      // (from, to, p): opposite `from` is edge (to, p), shared with the new
      // triangle starting at `to`; opposite `to` is edge (p, from).
      TriangleVertices v{e.from, e.to, id};
      std::array<TriangleId, 3> n{starting_at(e.to), ending_at(e.from), e.outside};
      if (v[0] == kInfiniteVertex) {
        v = {v[1], v[2], v[0]};
        n = {n[1], n[2], n[0]};
      } else if (v[1] == kInfiniteVertex) {
        v = {v[2], v[0], v[1]};
        n = {n[2], n[0], n[1]};
      }
      nt.v = v;
      nt.nbr = n;
      tris_.push_back(nt);
      if (nt.is_infinite()) {
        ++infinite_alive_;
      } else {
        ++finite_alive_;
      }
      HistoryTriangle& outside = tris_[e.outside];
      outside.nbr[outside.neighbor_index(e.dead)] = e.created;
      HistoryTriangle& dead = tris_[e.dead];
      dead.children[dead.child_count++] = e.created;
    }
    for (TriangleId t : cavity) {
      tris_[t].died_at = now;
      if (tris_[t].is_infinite()) {
        --infinite_alive_;
      } else {
        --finite_alive_;
      }
    }
    mark_.resize(tris_.size(), 0);
    clock_ = now;
    ++counters_.insertions;
    counters_.cavity_triangles += cavity.size();
    if (!euler_holds()) ++counters_.euler_violations;
  }

  std::uint32_t next_stamp() {
    if (++stamp_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      stamp_ = 1;
    }
    return stamp_;
  }

  // Straight-line walk state.
  struct Walker {
    Triangulation& tri;
    const Snapshot& snap;
    const Point& q;
    bool check;
    Point source{};
    std::uint32_t steps = 0;

    const HistoryTriangle& tr(TriangleId t) const { return tri.tris_[t]; }
    const Point& pt(PointId v) const { return tri.point(v); }

    TriangleId contains_q(TriangleId t) const { return tri.containing_or_none(t, q, snap.neighbors(t)); }

    void check_crossed(TriangleId t) {
      if (!check) return;
      ++tri.counters_.walk_conflict_checks;
      if (!tri.conflict(t, source) && !tri.conflict(t, q)) ++tri.counters_.walk_conflict_violations;
    }

    TriangleId from_triangle(TriangleId t) {
      if (!snap.contains(t)) throw std::invalid_argument("walk_locate: start triangle not in snapshot");
      ++steps;
      if (TriangleId f = contains_q(t); f != kNoTriangle) return f;
      const HistoryTriangle& s = tr(t);
      if (s.is_infinite()) return from_outside(t);
      const Containment c = point_in_triangle(source, pt(s.v[0]), pt(s.v[1]), pt(s.v[2]));
      if (c.kind == Containment::Kind::Inside) return cross(t);
      if (c.kind != Containment::Kind::OnEdge) throw std::invalid_argument("walk_locate: source not in start triangle");
      const PointId a = s.v[c.which];
      const PointId b = s.v[(c.which + 1) % 3];
      const Sign side = orient2d(pt(a), pt(b), q);
      if (side == Sign::Positive) return cross(t);
      if (side == Sign::Negative) {
        const TriangleId n = snap.neighbors(t)[(c.which + 2) % 3];
        ++steps;
        if (tr(n).is_infinite()) return n;
        if (TriangleId f = contains_q(n); f != kNoTriangle) return f;
        return cross(n);
      }
      // Along the edge line: continue through the endpoint ahead.
      return pivot(collinear_direction(source, q, pt(a), pt(b)) == Sign::Positive ? b : a, false);
    }

    // t is finite, its interior meets the ray, and q is not in t.
    TriangleId cross(TriangleId t) {
      for (;;) {
        const HistoryTriangle& s = tr(t);
        std::array<Sign, 3> o{};
        for (int i = 0; i < 3; ++i) o[i] = orient2d(source, q, pt(s.v[i]));
        int exit_edge = -1;
        int through_vertex = -1;
        for (int i = 0; i < 3; ++i) {
          const Sign prev = o[(i + 2) % 3];
          const Sign next = o[(i + 1) % 3];
          if (o[i] == Sign::Negative && next == Sign::Positive) exit_edge = i;
          if (o[i] == Sign::Zero && prev == Sign::Negative && next == Sign::Positive) through_vertex = i;
        }
        if (through_vertex >= 0) return pivot(s.v[through_vertex], false);
        if (exit_edge < 0) throw std::logic_error("walk_locate: no exit edge");
        const TriangleId n = snap.neighbors(t)[(exit_edge + 2) % 3];
        ++steps;
        if (tr(n).is_infinite()) return n;
        if (TriangleId f = contains_q(n); f != kNoTriangle) return f;
        check_crossed(n);
        t = n;
      }
    }

    // The ray passes through vertex w (or starts there when at_source).
    TriangleId pivot(PointId w, bool at_source) {
      if (index_of(w) >= snap.incident.size()) throw std::invalid_argument("walk_locate: vertex not in snapshot");
      const TriangleId first = snap.incident[index_of(w)];
      const Point& wp = pt(w);
      TriangleId t = first;
      do {
        ++steps;
        const HistoryTriangle& s = tr(t);
        const int i = s.vertex_index(w);
        if (!s.is_infinite()) {
          if (TriangleId f = contains_q(t); f != kNoTriangle) return f;
          const PointId x = s.v[(i + 1) % 3];
          const PointId y = s.v[(i + 2) % 3];
          const Sign ox = orient2d(wp, pt(x), q);
          const Sign oy = orient2d(wp, pt(y), q);
          if (ox == Sign::Positive && oy == Sign::Negative) {
            if (!at_source) check_crossed(t);
            return cross(t);
          }
          if (ox == Sign::Zero && collinear_direction(wp, q, wp, pt(x)) == Sign::Positive) return pivot(x, false);
          if (oy == Sign::Zero && collinear_direction(wp, q, wp, pt(y)) == Sign::Positive) return pivot(y, false);
        }
        t = snap.neighbors(t)[(i + 2) % 3];
      } while (t != first);
      do {
        const HistoryTriangle& s = tr(t);
        if (s.is_infinite()) {
          if (TriangleId f = contains_q(t); f != kNoTriangle) return f;
        }
        t = snap.neighbors(t)[(s.vertex_index(w) + 2) % 3];
      } while (t != first);
      throw std::logic_error("walk_locate: no triangle around vertex holds the direction");
    }

    // Source lies strictly beyond the hull edge of infinite triangle t.
    TriangleId from_outside(TriangleId t) {
      const std::size_t limit = snap.alive.size() + 2;
      int direction = 0;  // 0 towards v[1] (nbr[0]), 1 towards v[0] (nbr[1])
      bool decided = false;
      for (std::size_t hop = 0; hop < limit; ++hop) {
        const HistoryTriangle& s = tr(t);
        const Point& u = pt(s.v[0]);
        const Point& v = pt(s.v[1]);
        if (hop > 0) {
          ++steps;
          if (TriangleId f = contains_q(t); f != kNoTriangle) return f;
        }
        if (orient2d(u, v, source) == Sign::Positive) {
          const Sign ou = orient2d(source, q, u);
          const Sign ov = orient2d(source, q, v);
          const bool misses = (ou == ov && ou != Sign::Zero);
          if (!misses) {
            if (ou == Sign::Zero) return pivot(s.v[0], false);
            if (ov == Sign::Zero) return pivot(s.v[1], false);
            const TriangleId n = snap.neighbors(t)[2];
            ++steps;
            if (TriangleId f = contains_q(n); f != kNoTriangle) return f;
            check_crossed(n);
            return cross(n);
          }
          if (!decided) {
            const Sign sv_q = orient2d(source, v, q);
            const Sign sv_u = orient2d(source, v, u);
            const bool beyond_v = sv_q != Sign::Zero && sv_u != Sign::Zero && sv_q != sv_u;
            direction = beyond_v ? 0 : 1;
            decided = true;
          }
        } else if (!decided) {
          throw std::invalid_argument("walk_locate: source not beyond start hull edge");
        }
        t = snap.neighbors(t)[direction];
      }
      throw std::logic_error("walk_locate: segment never meets the hull");
    }
  };

  std::vector<Point> points_;
  std::vector<HistoryTriangle> tris_;
  std::array<TriangleId, 4> roots_{};
  std::uint32_t clock_ = 0;
  std::size_t finite_alive_ = 0;
  std::size_t infinite_alive_ = 0;
  WorkCounters counters_;

  std::vector<std::uint32_t> mark_;
  std::uint32_t stamp_ = 0;
  std::vector<TriangleId> scratch_queue_;
  std::vector<TriangleId> scratch_cavity_;
  std::vector<BoundaryEdge> scratch_boundary_;
  std::vector<std::pair<std::uint32_t, TriangleId>> scratch_by_start_;
  std::vector<std::pair<std::uint32_t, TriangleId>> scratch_by_end_;
};

}  // namespace nngdt
