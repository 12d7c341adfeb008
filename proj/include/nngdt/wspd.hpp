#pragma once

// Well-separated pair decomposition on a compressed quadtree.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nngdt/quadtree.hpp"

namespace nngdt {

/// A contiguous slice of the Morton order inside one quadtree node. It is the
/// whole node except when a multi-point bucket leaf had to be split, in which
/// case the slice is a half of the bucket (recursively).
struct Cluster {
  std::uint32_t node = kNoNode;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  Box box;

  std::uint32_t size() const { return end - begin; }
};

struct WspdPair {
  Cluster a;
  Cluster b;
};

inline constexpr double kDefaultSeparation = 2.5;

inline bool well_separated(const Box& a, const Box& b, double s) {
  return distance(a, b) >= s * std::max(a.radius(), b.radius());
}

namespace detail {

class WspdBuilder {
 public:
  WspdBuilder(const CompressedQuadtree& tree, double s) : tree_(tree), s_(s) {}

  std::vector<WspdPair> run() {
    self_pairs(whole(tree_.root));
    return std::move(out_);
  }

 private:
  Cluster whole(std::uint32_t id) const {
    const QuadtreeNode& n = tree_.nodes[id];
    return {id, n.begin, n.end, n.box};
  }

  bool is_whole_internal(const Cluster& c) const {
    const QuadtreeNode& n = tree_.nodes[c.node];
    return !n.is_leaf() && c.begin == n.begin && c.end == n.end;
  }

  Cluster slice(std::uint32_t node, std::uint32_t begin, std::uint32_t end) const {
    Cluster c{node, begin, end, {}};
    for (std::uint32_t i = begin; i < end; ++i) c.box.expand(tree_.sorted_points[i]);
    return c;
  }

  std::vector<Cluster> split(const Cluster& c) const {
    std::vector<Cluster> parts;
    if (is_whole_internal(c)) {
      for (std::uint32_t ch : tree_.nodes[c.node].child_span()) parts.push_back(whole(ch));
    } else {
      const std::uint32_t mid = c.begin + c.size() / 2;
      parts.push_back(slice(c.node, c.begin, mid));
      parts.push_back(slice(c.node, mid, c.end));
    }
    return parts;
  }

  void self_pairs(const Cluster& c) {
    if (c.size() < 2) return;
    const std::vector<Cluster> parts = split(c);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      for (std::size_t j = i + 1; j < parts.size(); ++j) find_pairs(parts[i], parts[j]);
    }
    for (const Cluster& p : parts) self_pairs(p);
  }

  void find_pairs(const Cluster& a, const Cluster& b) {
    if (well_separated(a.box, b.box, s_)) {
      out_.push_back({a, b});
      return;
    }
    // Two single points are always separated, so the larger side has >= 2 points.
    if (a.box.radius() >= b.box.radius()) {
      for (const Cluster& part : split(a)) find_pairs(part, b);
    } else {
      for (const Cluster& part : split(b)) find_pairs(a, part);
    }
  }

  const CompressedQuadtree& tree_;
  double s_;
  std::vector<WspdPair> out_;
};

}  // namespace detail

/// Every unordered pair of distinct points is covered by exactly one returned
/// pair. Requires s > 2.
inline std::vector<WspdPair> compute_wspd(const CompressedQuadtree& tree, double s = kDefaultSeparation) {
  if (!(s > 2.0)) throw std::invalid_argument("compute_wspd: separation must exceed 2");
  if (tree.root == kNoNode) return {};
  return detail::WspdBuilder(tree, s).run();
}

}  // namespace nngdt
