#pragma once

// Compressed quadtree over Morton-sorted points, built in one stack pass.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "nngdt/geometry.hpp"
#include "nngdt/morton.hpp"

namespace nngdt {

inline constexpr std::uint32_t kNoNode = 0xFFFFFFFFu;

struct QuadtreeNode {
  /// Cell side is 2^level grid units; level 0 is a single grid cell (bucket).
  unsigned level = 0;
  /// Key bits above the cell, i.e. key >> (2 * level).
  MortonKey prefix = 0;
  std::array<std::uint32_t, 4> children{kNoNode, kNoNode, kNoNode, kNoNode};
  std::uint8_t child_count = 0;
  /// Half-open slice of the Morton-sorted order.
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  /// Bounding box of the true coordinates of the contained points.
  Box box;

  bool is_leaf() const { return child_count == 0; }
  std::uint32_t size() const { return end - begin; }
  std::span<const std::uint32_t> child_span() const { return {children.data(), child_count}; }
  GridPoint anchor() const { return morton_decode(prefix << (2 * level)); }
};

struct CompressedQuadtree {
  unsigned bits = 0;
  std::vector<QuadtreeNode> nodes;
  std::uint32_t root = kNoNode;
  /// Point coordinates in Morton order.
  std::vector<Point> sorted_points;
  std::vector<MortonKey> sorted_keys;
  /// order[i] is the input index of the i-th point in Morton order.
  std::vector<std::uint32_t> order;

  const QuadtreeNode& node(std::uint32_t i) const { return nodes[i]; }
  std::size_t point_count() const { return sorted_points.size(); }
};

/// Quantization resolution used for a subset of n points: ceil(log2 n) + 2,
/// capped at half a 64-bit word.
inline unsigned default_quantization_bits(std::size_t n) {
  const unsigned lg = n <= 1 ? 0u : static_cast<unsigned>(std::bit_width(n - 1));
  return std::min(32u, lg + 2u);
}

/// Builds the tree from points already ordered by `sorted` (a permutation
/// of input indices in ascending key order). No re-sorting happens here.
inline CompressedQuadtree build_compressed_quadtree(std::span<const Point> points,
                                                    std::span<const GridPoint> grid,
                                                    std::span<const std::uint32_t> sorted,
                                                    unsigned bits) {
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("build_compressed_quadtree: empty input");
  if (grid.size() != n || sorted.size() != n) {
    throw std::invalid_argument("build_compressed_quadtree: size mismatch");
  }

  CompressedQuadtree tree;
  tree.bits = bits;
  tree.order.assign(sorted.begin(), sorted.end());
  tree.sorted_points.reserve(n);
  tree.sorted_keys.reserve(n);
  for (std::uint32_t i : sorted) {
    tree.sorted_points.push_back(points[i]);
    tree.sorted_keys.push_back(morton_key(grid[i].x, grid[i].y, bits));
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (tree.sorted_keys[i - 1] > tree.sorted_keys[i]) {
      throw std::invalid_argument("build_compressed_quadtree: input is not Morton-sorted");
    }
  }
  tree.nodes.reserve(2 * n);

  const auto& keys = tree.sorted_keys;
  auto make_leaf = [&](std::uint32_t begin, std::uint32_t end) {
    QuadtreeNode leaf;
    leaf.level = 0;
    leaf.prefix = keys[begin];
    leaf.begin = begin;
    leaf.end = end;
    for (std::uint32_t i = begin; i < end; ++i) leaf.box.expand(tree.sorted_points[i]);
    tree.nodes.push_back(leaf);
    return static_cast<std::uint32_t>(tree.nodes.size() - 1);
  };
  auto adopt = [&](std::uint32_t parent, std::uint32_t child) {
    QuadtreeNode& p = tree.nodes[parent];
    p.children[p.child_count++] = child;
  };

  // Internal nodes on the stack have strictly decreasing levels from bottom
  // to top; `last` is the most recently completed subtree.
  std::vector<std::uint32_t> stack;
  std::uint32_t begin = 0;
  std::uint32_t end = 1;
  while (end < n && keys[end] == keys[begin]) ++end;
  std::uint32_t last = make_leaf(begin, end);
  while (end < n) {
    begin = end;
    while (end < n && keys[end] == keys[begin]) ++end;
    const unsigned level = split_level(keys[begin - 1], keys[begin]);
    while (!stack.empty() && tree.nodes[stack.back()].level < level) {
      adopt(stack.back(), last);
      last = stack.back();
      stack.pop_back();
    }
    if (!stack.empty() && tree.nodes[stack.back()].level == level) {
      adopt(stack.back(), last);
    } else {
      QuadtreeNode internal;
      internal.level = level;
      internal.prefix = keys[begin] >> (2 * level);
      tree.nodes.push_back(internal);
      const auto id = static_cast<std::uint32_t>(tree.nodes.size() - 1);
      adopt(id, last);
      stack.push_back(id);
    }
    last = make_leaf(begin, end);
  }
  while (!stack.empty()) {
    adopt(stack.back(), last);
    last = stack.back();
    stack.pop_back();
  }
  tree.root = last;

  // Ranges and boxes of internal nodes, children before parents.
  std::vector<std::pair<std::uint32_t, bool>> work{{tree.root, false}};
  while (!work.empty()) {
    auto [id, expanded] = work.back();
    work.pop_back();
    QuadtreeNode& node = tree.nodes[id];
    if (node.is_leaf()) continue;
    if (!expanded) {
      work.push_back({id, true});
      for (std::uint32_t c : node.child_span()) work.push_back({c, false});
      continue;
    }
    node.begin = tree.nodes[node.children[0]].begin;
    node.end = tree.nodes[node.children[node.child_count - 1]].end;
    for (std::uint32_t c : node.child_span()) node.box.expand(tree.nodes[c].box);
  }
  return tree;
}

/// Quantizes, sorts and builds in one call.
inline CompressedQuadtree build_compressed_quadtree(std::span<const Point> points, unsigned bits) {
  if (points.empty()) throw std::invalid_argument("build_compressed_quadtree: empty input");
  const std::vector<GridPoint> grid = quantize(points, bits);
  std::vector<MortonKey> keys;
  keys.reserve(grid.size());
  for (const GridPoint& g : grid) keys.push_back(morton_key(g.x, g.y, bits));
  const std::vector<std::uint32_t> sorted = radix_sort(keys);
  return build_compressed_quadtree(points, grid, sorted, bits);
}

inline CompressedQuadtree build_compressed_quadtree(std::span<const Point> points) {
  return build_compressed_quadtree(points, default_quantization_bits(points.size()));
}

}  // namespace nngdt
