#pragma once

// Randomized incremental Delaunay construction whose point location runs
// through nearest-neighbor graphs.
//
// Points are inserted in a seeded random order, grouped into rounds of
// doubling size. Before round k is inserted, its points are located in the
// triangulation of the earlier rounds: nearest-neighbor graphs of decreasing
// subsets pick representatives for components that have no earlier vertex,
// the representatives are located through the history, and everything else
// is reached by walking along nearest-neighbor edges in stored round
// snapshots.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nngdt/geometry.hpp"
#include "nngdt/nng.hpp"
#include "nngdt/triangulation.hpp"

namespace nngdt {

inline constexpr std::uint32_t kDefaultRoundBase = 32;

struct RoundPlan {
  std::uint32_t base = 0;
  /// sizes[k - 1] = |R_k|.
  std::vector<std::uint32_t> sizes;
  /// prefix[j] = |S_j|, with prefix[0] = 0.
  std::vector<std::uint32_t> prefix;

  std::uint32_t rounds() const { return static_cast<std::uint32_t>(sizes.size()); }
  std::uint32_t size_of(std::uint32_t k) const { return sizes[k - 1]; }
  std::uint32_t inserted_before(std::uint32_t k) const { return prefix[k - 1]; }
  std::uint32_t total() const { return prefix.back(); }
};

/// Doubling rounds starting at min(n, c); the last round takes whatever
/// remains once that is at most twice the previous round.
inline RoundPlan plan_rounds(std::size_t n, std::uint32_t c) {
  if (n < 1) throw std::invalid_argument("plan_rounds: need at least one point");
  if (c < 3) throw std::invalid_argument("plan_rounds: round base must be at least 3");
  RoundPlan plan;
  plan.base = c;
  plan.prefix.push_back(0);
  std::size_t remaining = n;
  std::size_t size = std::min<std::size_t>(n, c);
  for (;;) {
    plan.sizes.push_back(static_cast<std::uint32_t>(size));
    plan.prefix.push_back(plan.prefix.back() + static_cast<std::uint32_t>(size));
    remaining -= size;
    if (remaining == 0) break;
    size = remaining <= 2 * size ? remaining : 2 * size;
  }
  return plan;
}

/// ceil(log2(n / c + 1)), the round count in the closed form: the smallest m
/// with c * (2^m - 1) >= n.
inline std::uint32_t closed_form_round_count(std::size_t n, std::uint32_t c) {
  std::uint32_t m = 0;
  while (static_cast<std::uint64_t>(c) * ((std::uint64_t{1} << m) - 1) < n) ++m;
  return m;
}

struct Level {
  std::vector<PointId> members;
  /// Graph over S_j together with the members; present for levels where the
  /// cascade ran.
  std::optional<NngGraph> graph;
  Components components;
};

/// The cascade T_{k-1} = R_k, T_{k-2}, ... for one round. levels[j] holds T_j.
struct LevelSets {
  std::uint32_t round = 0;
  /// Level at which the cascade stopped (0, or a level whose set is empty).
  std::uint32_t stop_level = 0;
  std::vector<Level> levels;
};

struct NngBuild {
  std::uint32_t level = 0;
  std::uint32_t size = 0;
};

inline WorkCounters operator-(const WorkCounters& a, const WorkCounters& b) {
  WorkCounters d;
  d.history_descents = a.history_descents - b.history_descents;
  d.history_visits = a.history_visits - b.history_visits;
  d.conflict_tests = a.conflict_tests - b.conflict_tests;
  d.containment_searches = a.containment_searches - b.containment_searches;
  d.walks = a.walks - b.walks;
  d.walk_steps = a.walk_steps - b.walk_steps;
  d.insertions = a.insertions - b.insertions;
  d.cavity_triangles = a.cavity_triangles - b.cavity_triangles;
  d.walk_conflict_checks = a.walk_conflict_checks - b.walk_conflict_checks;
  d.walk_conflict_violations = a.walk_conflict_violations - b.walk_conflict_violations;
  d.euler_violations = a.euler_violations - b.euler_violations;
  return d;
}

struct RoundCounters {
  std::uint32_t round = 0;
  std::vector<NngBuild> nng_builds;
  /// |T_j| for j = 0..k-1 (round 1 has none).
  std::vector<std::uint32_t> level_sizes;
  std::uint32_t stop_level = 0;
  /// Work spent locating the round's points in the previous snapshot.
  WorkCounters locate;
  /// Work spent inserting them (history descent to the present plus cavities).
  WorkCounters insert;
  std::size_t snapshot_alive = 0;
};

struct InvariantReport {
  std::uint64_t halving_violations = 0;
  std::uint64_t unseeded_components = 0;
  std::uint64_t hint_violations = 0;
  std::uint64_t walk_conflict_checks = 0;
  std::uint64_t walk_conflict_violations = 0;
  std::uint64_t euler_violations = 0;

  bool clean() const {
    return halving_violations == 0 && unseeded_components == 0 && hint_violations == 0 &&
           walk_conflict_violations == 0 && euler_violations == 0;
  }
};

struct Counters {
  std::vector<RoundCounters> rounds;
  WorkCounters total;
  std::size_t points = 0;

  double location_work_per_point() const {
    return points == 0 ? 0.0 : static_cast<double>(total.location_work()) / static_cast<double>(points);
  }
  std::uint64_t nng_points() const {
    std::uint64_t s = 0;
    for (const RoundCounters& r : rounds) {
      for (const NngBuild& b : r.nng_builds) s += b.size;
    }
    return s;
  }
  std::size_t nng_builds() const {
    std::size_t s = 0;
    for (const RoundCounters& r : rounds) s += r.nng_builds.size();
    return s;
  }
};

struct RunOptions {
  std::uint64_t seed = 1;
  std::uint32_t round_base = kDefaultRoundBase;
  /// Runtime structural checks (walk conflicts, hint containment, halving).
  bool check_invariants = false;
  bool keep_snapshots = false;
};

struct RunResult {
  /// insertion_to_input[i] is the input index of the point with PointId i.
  std::vector<std::uint32_t> insertion_to_input;
  Triangulation triangulation;
  RoundPlan plan;
  Counters counters;
  InvariantReport invariants;
  std::vector<Snapshot> snapshots;

  /// Finite triangles in input indices, rotated smallest-first and sorted.
  std::vector<std::array<std::uint32_t, 3>> triangles() const {
    std::vector<std::array<std::uint32_t, 3>> out;
    for (const TriangleVertices& t : triangulation.triangles()) {
      std::array<std::uint32_t, 3> m{insertion_to_input[index_of(t[0])], insertion_to_input[index_of(t[1])],
                                     insertion_to_input[index_of(t[2])]};
      std::rotate(m.begin(), std::min_element(m.begin(), m.end()), m.end());
      out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

struct Ingested {
  std::vector<Point> points;
  /// Input index of each kept point.
  std::vector<std::uint32_t> kept;
  /// (dropped input index, index of the earlier identical point).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> duplicates;
};

/// Drops repeated coordinates (keeping the first occurrence) and rejects
/// non-finite input.
inline Ingested ingest(std::span<const Point> input) {
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (!is_finite(input[i])) {
      throw std::invalid_argument("point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  std::vector<std::uint32_t> idx(input.size());
  for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    return input[a].x < input[b].x || (input[a].x == input[b].x && input[a].y < input[b].y);
  });
  std::vector<bool> drop(input.size(), false);
  Ingested out;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    std::size_t first = i - 1;
    if (input[idx[i]] == input[idx[first]]) {
      while (first > 0 && input[idx[first - 1]] == input[idx[i]]) --first;
      drop[idx[i]] = true;
      out.duplicates.push_back({idx[i], idx[first]});
    }
  }
  std::sort(out.duplicates.begin(), out.duplicates.end());
  for (std::uint32_t i = 0; i < input.size(); ++i) {
    if (drop[i]) continue;
    out.points.push_back(input[i]);
    out.kept.push_back(i);
  }
  return out;
}

/// Seeded shuffle followed by moving the first non-collinear triple to the
/// front. Returns the input index for each insertion position.
inline std::vector<std::uint32_t> insertion_order(std::span<const Point> points, std::uint64_t seed) {
  std::vector<std::uint32_t> shuffled(points.size());
  for (std::uint32_t i = 0; i < shuffled.size(); ++i) shuffled[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::vector<Point> in_order;
  in_order.reserve(points.size());
  for (std::uint32_t i : shuffled) in_order.push_back(points[i]);
  const std::vector<std::uint32_t> boot = bootstrap_order(in_order);
  std::vector<std::uint32_t> out;
  out.reserve(points.size());
  for (std::uint32_t i : boot) out.push_back(shuffled[i]);
  return out;
}

/// The nearest-neighbor cascade of round k. `points` are in
/// insertion order.
inline LevelSets build_level_sets(std::uint32_t k, const RoundPlan& plan, std::span<const Point> points,
                                  RoundCounters* counters = nullptr) {
  if (k < 2 || k > plan.rounds()) throw std::invalid_argument("build_level_sets: round out of range");
  LevelSets ls;
  ls.round = k;
  ls.levels.resize(k);
  const std::uint32_t begin = plan.inserted_before(k);
  for (std::uint32_t i = 0; i < plan.size_of(k); ++i) ls.levels[k - 1].members.push_back(point_id(begin + i));

  std::vector<Point> subset;
  std::vector<PointId> ids;
  std::uint32_t j = k - 1;
  while (j > 0 && !ls.levels[j].members.empty()) {
    const std::uint32_t s = plan.prefix[j];
    Level& level = ls.levels[j];
    subset.clear();
    ids.clear();
    for (std::uint32_t i = 0; i < s; ++i) {
      subset.push_back(points[i]);
      ids.push_back(point_id(i));
    }
    for (PointId p : level.members) {
      subset.push_back(points[index_of(p)]);
      ids.push_back(p);
    }
    level.graph = nearest_neighbor_graph(subset, ids);
    level.components = connected_components(*level.graph, [s](PointId p) { return index_of(p) < s; });
    if (counters) counters->nng_builds.push_back({j, static_cast<std::uint32_t>(subset.size())});
    std::vector<PointId>& next = ls.levels[j - 1].members;
    for (const Component& c : level.components.list) {
      if (!c.has_s) next.push_back(*c.first_t);
    }
    std::sort(next.begin(), next.end(), [](PointId a, PointId b) { return index_of(a) < index_of(b); });
    --j;
  }
  ls.stop_level = j;
  return ls;
}

namespace detail {

inline bool hint_contains(const Triangulation& tri, TriangleId t, const Point& p) {
  const HistoryTriangle& tr = tri.triangle(t);
  if (tr.is_infinite()) return orient2d(tri.point(tr.v[0]), tri.point(tr.v[1]), p) == Sign::Positive;
  const Containment c = point_in_triangle(p, tri.point(tr.v[0]), tri.point(tr.v[1]), tri.point(tr.v[2]));
  return c.kind == Containment::Kind::Inside || c.kind == Containment::Kind::OnEdge;
}

}  // namespace detail

/// Locates every point of R_k in DT(S_{k-1}).
/// snapshots[j - 1] must hold DT(S_j). Returns the containing triangle per
/// point of R_k, indexed by PointId minus |S_{k-1}|.
inline std::vector<TriangleId> locate_ascending(std::uint32_t k, const LevelSets& ls, const RoundPlan& plan,
                                                std::span<const Snapshot> snapshots, Triangulation& tri,
                                                bool check = false, InvariantReport* report = nullptr) {
  const std::uint32_t base = plan.inserted_before(k);
  const std::uint32_t count = plan.size_of(k);
  std::vector<TriangleId> loc(count, kNoTriangle);
  // p is in T_j exactly for j >= tier[p - base].
  std::vector<std::uint32_t> tier(count, k - 1);
  for (std::uint32_t j = 0; j + 1 < k; ++j) {
    for (PointId p : ls.levels[j].members) {
      std::uint32_t& t = tier[index_of(p) - base];
      t = std::min(t, j);
    }
  }

  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> adjacency;
  std::vector<bool> visited;
  std::vector<std::uint32_t> stack;

  for (std::uint32_t j = ls.stop_level; j + 1 < k; ++j) {
    const std::uint32_t s_next = plan.prefix[j + 1];
    const Snapshot& snap = snapshots[j];

    for (PointId p : ls.levels[j].members) {
      const Point& pt = tri.point(p);
      TriangleId& at = loc[index_of(p) - base];
      const TriangleId conflicting =
          j == 0 ? tri.locate_conflict_from_roots(pt, s_next) : tri.history_locate_conflict(pt, at, s_next);
      at = tri.conflict_to_containing(pt, conflicting, snap);
    }

    const Level& level = ls.levels[j + 1];
    const NngGraph& g = *level.graph;
    const std::size_t n = g.size();
    offsets.assign(n + 1, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
      ++offsets[i + 1];
      ++offsets[g.nn[i] + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    adjacency.assign(offsets[n], 0);
    {
      std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
      for (std::uint32_t i = 0; i < n; ++i) {
        adjacency[fill[i]++] = g.nn[i];
        adjacency[fill[g.nn[i]]++] = i;
      }
    }
    auto is_located = [&](std::uint32_t v) {
      const std::uint32_t id = index_of(g.ids[v]);
      return id < s_next || tier[id - base] <= j;
    };

    visited.assign(n, false);
    for (const Component& comp : level.components.list) {
      std::uint32_t seed = kNoNode;
      for (std::uint32_t v : comp.members) {
        if (is_located(v) && (seed == kNoNode || index_of(g.ids[v]) < index_of(g.ids[seed]))) seed = v;
      }
      if (seed == kNoNode) {
        if (report) ++report->unseeded_components;
        throw std::logic_error("locate_ascending: component without a located vertex");
      }
      stack.assign(1, seed);
      visited[seed] = true;
      while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        for (std::uint32_t e = offsets[v]; e < offsets[v + 1]; ++e) {
          const std::uint32_t u = adjacency[e];
          if (visited[u]) continue;
          visited[u] = true;
          stack.push_back(u);
          if (is_located(u)) continue;
          const PointId from = g.ids[v];
          const PointId to = g.ids[u];
          const WalkStart start = index_of(from) < s_next
                                      ? WalkStart{from}
                                      : WalkStart{LocatedPoint{tri.point(from), loc[index_of(from) - base]}};
          loc[index_of(to) - base] = tri.walk_locate(snap, start, tri.point(to), check).triangle;
        }
      }
    }
  }

  if (check && report) {
    for (std::uint32_t i = 0; i < count; ++i) {
      if (!detail::hint_contains(tri, loc[i], tri.point(point_id(base + i)))) ++report->hint_violations;
    }
  }
  return loc;
}

/// Builds the Delaunay triangulation of duplicate-free `points`.
inline RunResult run(std::span<const Point> points, const RunOptions& options = {}) {
  if (points.size() < 3) throw DegenerateInputError("need at least three distinct points");
  const std::vector<std::uint32_t> order = insertion_order(points, options.seed);
  std::vector<Point> in_order;
  in_order.reserve(points.size());
  for (std::uint32_t i : order) in_order.push_back(points[i]);

  RunResult result{order, Triangulation(std::move(in_order)), plan_rounds(points.size(), options.round_base), {}, {}, {}};
  Triangulation& tri = result.triangulation;
  const RoundPlan& plan = result.plan;
  Counters& counters = result.counters;
  InvariantReport& report = result.invariants;
  counters.points = points.size();
  std::vector<Snapshot> snapshots;

  {
    RoundCounters rc;
    rc.round = 1;
    const WorkCounters before = tri.counters();
    for (std::uint32_t i = 3; i < plan.prefix[1]; ++i) tri.insert(point_id(i));
    rc.insert = tri.counters() - before;
    snapshots.push_back(tri.take_snapshot(1));
    rc.snapshot_alive = snapshots.back().alive.size();
    counters.rounds.push_back(std::move(rc));
  }

  for (std::uint32_t k = 2; k <= plan.rounds(); ++k) {
    RoundCounters rc;
    rc.round = k;
    const LevelSets ls = build_level_sets(k, plan, tri.points(), &rc);
    rc.stop_level = ls.stop_level;
    for (const Level& level : ls.levels) rc.level_sizes.push_back(static_cast<std::uint32_t>(level.members.size()));
    if (options.check_invariants) {
      for (std::uint32_t j = 0; j + 1 < k; ++j) {
        if (2 * rc.level_sizes[j] > rc.level_sizes[j + 1]) ++report.halving_violations;
      }
    }

    const WorkCounters before_locate = tri.counters();
    const std::vector<TriangleId> hints =
        locate_ascending(k, ls, plan, snapshots, tri, options.check_invariants, &report);
    const WorkCounters before_insert = tri.counters();
    rc.locate = before_insert - before_locate;

    const std::uint32_t base = plan.inserted_before(k);
    for (std::uint32_t i = 0; i < plan.size_of(k); ++i) tri.insert(point_id(base + i), hints[i]);
    rc.insert = tri.counters() - before_insert;
    snapshots.push_back(tri.take_snapshot(k));
    rc.snapshot_alive = snapshots.back().alive.size();
    counters.rounds.push_back(std::move(rc));
  }

  counters.total = tri.counters();
  report.walk_conflict_checks = counters.total.walk_conflict_checks;
  report.walk_conflict_violations = counters.total.walk_conflict_violations;
  report.euler_violations = counters.total.euler_violations;
  if (options.keep_snapshots) result.snapshots = std::move(snapshots);
  return result;
}

/// Plain randomized incremental construction: every point is located from
/// the history roots. Same insertion order as run() for the same seed.
inline RunResult run_plain(std::span<const Point> points, std::uint64_t seed) {
  if (points.size() < 3) throw DegenerateInputError("need at least three distinct points");
  const std::vector<std::uint32_t> order = insertion_order(points, seed);
  std::vector<Point> in_order;
  in_order.reserve(points.size());
  for (std::uint32_t i : order) in_order.push_back(points[i]);
  RunResult result{order, Triangulation(std::move(in_order)), plan_rounds(points.size(), static_cast<std::uint32_t>(points.size())), {}, {}, {}};
  Triangulation& tri = result.triangulation;
  RoundCounters rc;
  rc.round = 1;
  for (std::uint32_t i = 3; i < points.size(); ++i) tri.insert(point_id(i));
  rc.insert = tri.counters();
  result.counters.rounds.push_back(std::move(rc));
  result.counters.total = tri.counters();
  result.counters.points = points.size();
  result.invariants.euler_violations = tri.counters().euler_violations;
  return result;
}

struct CostReport {
  std::vector<std::string> violations;
  double location_work_per_point = 0.0;

  bool ok() const { return violations.empty(); }
};

/// Checks the nearest-neighbor build structure of a run: round k performs at
/// most k - 1 builds, and the build at level j has at most 2^(j+1) * c
/// points (the top build of the last round at most N).
inline CostReport validate_cost_profile(const Counters& counters, const RoundPlan& plan) {
  CostReport report;
  report.location_work_per_point = counters.location_work_per_point();
  const std::uint64_t c = plan.base;
  const std::uint64_t n = plan.total();
  for (const RoundCounters& r : counters.rounds) {
    const std::uint32_t k = r.round;
    if (r.nng_builds.size() + 1 > std::max<std::size_t>(k, 1)) {
      std::ostringstream msg;
      msg << "round " << k << ": " << r.nng_builds.size() << " nearest-neighbor builds exceed " << (k - 1);
      report.violations.push_back(msg.str());
    }
    for (const NngBuild& b : r.nng_builds) {
      const bool top_of_last = k == plan.rounds() && b.level + 1 == k;
      const std::uint64_t bound = top_of_last ? n : (std::uint64_t{1} << (b.level + 1)) * c;
      if (b.size > bound) {
        std::ostringstream msg;
        msg << "round " << k << " level " << b.level << ": build of " << b.size << " points exceeds " << bound;
        report.violations.push_back(msg.str());
      }
    }
  }
  return report;
}

}  // namespace nngdt
