#pragma once

// Exact nearest-neighbor graphs over point subsets, their weakly connected
// components, and the spread diagnostic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nngdt/geometry.hpp"
#include "nngdt/quadtree.hpp"

namespace nngdt {

/// Directed 1-nearest-neighbor graph. Vertices are local indices into `ids`;
/// nn[i] is the local index of the nearest neighbor of vertex i under the
/// (squared distance, PointId) order.
struct NngGraph {
  std::vector<PointId> ids;
  std::vector<std::uint32_t> nn;

  std::size_t size() const { return ids.size(); }
  PointId neighbor_id(std::uint32_t i) const { return ids[nn[i]]; }
};

/// True if candidate (d2, id) precedes the current best under the tie order.
inline bool nearer(double d2, PointId id, double best_d2, PointId best_id) {
  return d2 < best_d2 || (d2 == best_d2 && index_of(id) < index_of(best_id));
}

namespace detail {

struct Neighbor {
  double d2 = std::numeric_limits<double>::infinity();
  std::uint32_t pos = kNoNode;  // position in Morton order
  PointId id{0xFFFFFFFFu};
};

inline void consider(const CompressedQuadtree& tree, std::span<const PointId> ids, std::uint32_t self,
                     std::uint32_t other, Neighbor& best) {
  if (other == self) return;
  const double d2 = squared_distance(tree.sorted_points[self], tree.sorted_points[other]);
  const PointId id = ids[tree.order[other]];
  if (nearer(d2, id, best.d2, best.id)) best = {d2, other, id};
}

// Best-first descent from the root, pruning boxes strictly farther than the
// current best; ties must still be explored because of the id tie order.
inline Neighbor nearest_of(const CompressedQuadtree& tree, std::span<const PointId> ids, std::uint32_t self,
                           std::vector<std::pair<double, std::uint32_t>>& heap) {
  Neighbor best;
  const std::size_t n = tree.point_count();
  for (std::uint32_t off = 1; off <= 2; ++off) {
    if (self >= off) consider(tree, ids, self, self - off, best);
    if (self + off < n) consider(tree, ids, self, self + off, best);
  }
  const Point& q = tree.sorted_points[self];
  auto cmp = [](const auto& l, const auto& r) { return l.first > r.first; };
  heap.clear();
  heap.push_back({squared_distance(q, tree.nodes[tree.root].box), tree.root});
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), cmp);
    const auto [d2, id] = heap.back();
    heap.pop_back();
    if (d2 > best.d2) break;
    const QuadtreeNode& node = tree.nodes[id];
    if (node.is_leaf()) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) consider(tree, ids, self, i, best);
      continue;
    }
    for (std::uint32_t c : node.child_span()) {
      const QuadtreeNode& child = tree.nodes[c];
      if (child.size() == 1 && child.begin == self) continue;
      const double cd2 = squared_distance(q, child.box);
      if (cd2 <= best.d2) {
        heap.push_back({cd2, c});
        std::push_heap(heap.begin(), heap.end(), cmp);
      }
    }
  }
  return best;
}

}  // namespace detail

/// Exact nearest-neighbor graph of `points` (with identifiers `ids`).
/// Throws std::invalid_argument for fewer than two points or duplicates.
inline NngGraph nearest_neighbor_graph(std::span<const Point> points, std::span<const PointId> ids) {
  const std::size_t n = points.size();
  if (ids.size() != n) throw std::invalid_argument("nearest_neighbor_graph: size mismatch");
  if (n < 2) throw std::invalid_argument("nearest_neighbor_graph: needs at least two points");

  const CompressedQuadtree tree = build_compressed_quadtree(points);
  NngGraph g;
  g.ids.assign(ids.begin(), ids.end());
  g.nn.assign(n, 0);
  std::vector<std::pair<double, std::uint32_t>> heap;
  for (std::uint32_t pos = 0; pos < n; ++pos) {
    const detail::Neighbor best = detail::nearest_of(tree, ids, pos, heap);
    if (best.d2 == 0.0) throw std::invalid_argument("nearest_neighbor_graph: duplicate points");
    g.nn[tree.order[pos]] = tree.order[best.pos];
  }
  return g;
}

/// Convenience overload with ids 0..n-1.
inline NngGraph nearest_neighbor_graph(std::span<const Point> points) {
  std::vector<PointId> ids(points.size());
  for (std::uint32_t i = 0; i < ids.size(); ++i) ids[i] = point_id(i);
  return nearest_neighbor_graph(points, ids);
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
};

struct Component {
  /// Local vertex indices, ascending.
  std::vector<std::uint32_t> members;
  bool has_s = false;
  /// Smallest member id outside S; set only when has_s is false.
  std::optional<PointId> first_t;
};

struct Components {
  std::vector<Component> list;
  /// component_of[i] indexes `list` for local vertex i.
  std::vector<std::uint32_t> component_of;
};

/// Weakly connected components of the undirected version of `g`.
/// Components are ordered by their smallest local vertex index.
inline Components connected_components(const NngGraph& g, const std::function<bool(PointId)>& in_s) {
  const std::size_t n = g.size();
  DisjointSets sets(n);
  for (std::uint32_t i = 0; i < n; ++i) sets.unite(i, g.nn[i]);

  Components out;
  out.component_of.assign(n, kNoNode);
  std::vector<std::uint32_t> slot_of_root(n, kNoNode);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t r = sets.find(i);
    if (slot_of_root[r] == kNoNode) {
      slot_of_root[r] = static_cast<std::uint32_t>(out.list.size());
      out.list.emplace_back();
    }
    const std::uint32_t c = slot_of_root[r];
    out.component_of[i] = c;
    Component& comp = out.list[c];
    comp.members.push_back(i);
    if (in_s(g.ids[i])) {
      comp.has_s = true;
    } else if (!comp.first_t || index_of(g.ids[i]) < index_of(*comp.first_t)) {
      comp.first_t = g.ids[i];
    }
  }
  for (Component& comp : out.list) {
    if (comp.has_s) comp.first_t.reset();
  }
  return out;
}

struct SpreadReport {
  double min_distance = 0.0;
  /// Bounding-box diagonal; overestimates the diameter by at most sqrt(2).
  double max_distance = 0.0;
  double spread = 0.0;
  double approximation_factor = std::sqrt(2.0);
};

inline SpreadReport compute_spread(std::span<const Point> points) {
  if (points.size() < 2) throw std::invalid_argument("compute_spread: needs at least two points");
  const NngGraph g = nearest_neighbor_graph(points);
  double min_d2 = std::numeric_limits<double>::infinity();
  for (std::uint32_t i = 0; i < g.size(); ++i) {
    min_d2 = std::min(min_d2, squared_distance(points[i], points[g.nn[i]]));
  }
  SpreadReport r;
  r.min_distance = std::sqrt(min_d2);
  r.max_distance = Box::of(points).diagonal();
  r.spread = r.max_distance / r.min_distance;
  return r;
}

}  // namespace nngdt
