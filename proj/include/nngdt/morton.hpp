#pragma once

// Z-order keys over quantized coordinates and an LSD radix sort for them.

#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "nngdt/geometry.hpp"

namespace nngdt {

using MortonKey = std::uint64_t;

namespace detail {

// Spreads the low 32 bits of v into the even bit positions.
constexpr std::uint64_t spread_bits(std::uint64_t v) {
  v &= 0x00000000FFFFFFFFull;
  v = (v | (v << 16)) & 0x0000FFFF0000FFFFull;
  v = (v | (v << 8)) & 0x00FF00FF00FF00FFull;
  v = (v | (v << 4)) & 0x0F0F0F0F0F0F0F0Full;
  v = (v | (v << 2)) & 0x3333333333333333ull;
  v = (v | (v << 1)) & 0x5555555555555555ull;
  return v;
}

constexpr std::uint32_t compact_bits(std::uint64_t v) {
  v &= 0x5555555555555555ull;
  v = (v | (v >> 1)) & 0x3333333333333333ull;
  v = (v | (v >> 2)) & 0x0F0F0F0F0F0F0F0Full;
  v = (v | (v >> 4)) & 0x00FF00FF00FF00FFull;
  v = (v | (v >> 8)) & 0x0000FFFF0000FFFFull;
  v = (v | (v >> 16)) & 0x00000000FFFFFFFFull;
  return static_cast<std::uint32_t>(v);
}

}  // namespace detail

/// Interleaves qx and qy (y in the odd bit positions).
inline MortonKey morton_key(std::uint64_t qx, std::uint64_t qy, unsigned bits) {
  if (bits < 1 || bits > 32) throw std::invalid_argument("morton_key: bits must be in [1, 32]");
  const std::uint64_t limit = std::uint64_t{1} << bits;
  if (qx >= limit || qy >= limit) throw std::out_of_range("morton_key: coordinate exceeds grid");
  return detail::spread_bits(qx) | (detail::spread_bits(qy) << 1);
}

inline GridPoint morton_decode(MortonKey key) {
  return {detail::compact_bits(key), detail::compact_bits(key >> 1)};
}

/// Level of the smallest quadtree cell holding both keys: the number of
/// trailing two-bit digits in which they may differ.
constexpr unsigned split_level(MortonKey a, MortonKey b) {
  return (static_cast<unsigned>(std::bit_width(a ^ b)) + 1) / 2;
}

/// Stable ascending sort of `keys`; returns the permutation `perm` such that
/// keys[perm[0]] <= keys[perm[1]] <= ... Uses 8-bit digits and skips the
/// passes above the widest key.
inline std::vector<std::uint32_t> radix_sort(std::span<const MortonKey> keys) {
  const std::size_t n = keys.size();
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  if (n < 2) return perm;

  MortonKey all = 0;
  for (MortonKey k : keys) all |= k;
  const unsigned passes = (static_cast<unsigned>(std::bit_width(all)) + 7) / 8;

  std::vector<std::uint32_t> scratch(n);
  for (unsigned pass = 0; pass < passes; ++pass) {
    const unsigned shift = 8 * pass;
    std::array<std::size_t, 257> count{};
    for (std::uint32_t i : perm) ++count[((keys[i] >> shift) & 0xFF) + 1];
    for (std::size_t d = 1; d < count.size(); ++d) count[d] += count[d - 1];
    for (std::uint32_t i : perm) scratch[count[(keys[i] >> shift) & 0xFF]++] = i;
    perm.swap(scratch);
  }
  return perm;
}

}  // namespace nngdt
