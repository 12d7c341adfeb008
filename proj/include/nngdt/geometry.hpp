#pragma once

// Planar kernel: points, identifiers, exact orientation and in-circle
// predicates, triangle containment and grid quantization.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nngdt/detail/expansion.hpp"

namespace nngdt {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Position of a point in the insertion order.
enum class PointId : std::uint32_t {};

constexpr std::uint32_t index_of(PointId id) { return static_cast<std::uint32_t>(id); }
constexpr PointId point_id(std::uint32_t i) { return static_cast<PointId>(i); }

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

constexpr Sign operator-(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }

constexpr Sign sign_of(double v) {
  return v > 0.0 ? Sign::Positive : (v < 0.0 ? Sign::Negative : Sign::Zero);
}

inline bool is_finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

namespace detail {

inline constexpr double kEpsilon = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
inline constexpr double kOrientBound = (3.0 + 16.0 * kEpsilon) * kEpsilon;
inline constexpr double kInCircleBound = (10.0 + 96.0 * kEpsilon) * kEpsilon;

// Nonzero magnitudes inside these windows keep every product of the filter and
// the expansion stage normal and finite. Anything else goes to the wide path.
inline constexpr double kOrientMin = 0x1p-450;
inline constexpr double kOrientMax = 0x1p+500;
inline constexpr double kInCircleMin = 0x1p-200;
inline constexpr double kInCircleMax = 0x1p+240;

inline bool in_window(double v, double lo, double hi) {
  const double m = std::abs(v);
  return m == 0.0 || (m >= lo && m <= hi);
}

template <class... P>
bool all_in_window(double lo, double hi, const P&... p) {
  return ((in_window(p.x, lo, hi) && in_window(p.y, lo, hi)) && ...);
}

using WideInt = boost::multiprecision::cpp_int;

// Every coordinate as an integer multiple of one common power of two.
template <class... P>
std::array<WideInt, 2 * sizeof...(P)> common_scale(const P&... p) {
  constexpr std::size_t n = 2 * sizeof...(P);
  const std::array<double, n> v{(p.x)..., (p.y)...};
  std::array<std::int64_t, n> mant{};
  std::array<int, n> exp{};
  int lowest = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == 0.0) continue;
    int e = 0;
    mant[i] = static_cast<std::int64_t>(std::ldexp(std::frexp(v[i], &e), 53));
    exp[i] = e - 53;
    lowest = std::min(lowest, exp[i]);
  }
  std::array<WideInt, n> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (mant[i] != 0) out[i] = WideInt(mant[i]) << (exp[i] - lowest);
  }
  return out;
}

inline Sign wide_sign(const WideInt& v) { return static_cast<Sign>(v.sign()); }

// Layout of common_scale: x coordinates first, then y coordinates.
inline Sign orient2d_wide(const Point& a, const Point& b, const Point& c) {
  const auto v = common_scale(a, b, c);
  const WideInt& ax = v[0], &bx = v[1], &cx = v[2], &ay = v[3], &by = v[4], &cy = v[5];
  return wide_sign(WideInt((ax - cx) * (by - cy) - (ay - cy) * (bx - cx)));
}

inline Sign incircle_wide(const Point& a, const Point& b, const Point& c, const Point& d) {
  const auto v = common_scale(a, b, c, d);
  const WideInt adx = v[0] - v[3], bdx = v[1] - v[3], cdx = v[2] - v[3];
  const WideInt ady = v[4] - v[7], bdy = v[5] - v[7], cdy = v[6] - v[7];
  const WideInt alift = adx * adx + ady * ady;
  const WideInt blift = bdx * bdx + bdy * bdy;
  const WideInt clift = cdx * cdx + cdy * cdy;
  return wide_sign(WideInt(alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                         clift * (adx * bdy - bdx * ady)));
}

inline Sign orient2d_exact(const Point& a, const Point& b, const Point& c) {
  const Expansion acx = Expansion::difference(a.x, c.x);
  const Expansion bcy = Expansion::difference(b.y, c.y);
  const Expansion acy = Expansion::difference(a.y, c.y);
  const Expansion bcx = Expansion::difference(b.x, c.x);
  return static_cast<Sign>((acx * bcy - acy * bcx).sign());
}

inline Sign incircle_exact(const Point& a, const Point& b, const Point& c, const Point& d) {
  const Expansion adx = Expansion::difference(a.x, d.x);
  const Expansion ady = Expansion::difference(a.y, d.y);
  const Expansion bdx = Expansion::difference(b.x, d.x);
  const Expansion bdy = Expansion::difference(b.y, d.y);
  const Expansion cdx = Expansion::difference(c.x, d.x);
  const Expansion cdy = Expansion::difference(c.y, d.y);
  const Expansion alift = adx * adx + ady * ady;
  const Expansion blift = bdx * bdx + bdy * bdy;
  const Expansion clift = cdx * cdx + cdy * cdy;
  const Expansion det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                        clift * (adx * bdy - bdx * ady);
  return static_cast<Sign>(det.sign());
}

/// In-circle test without the orientation precondition check.
inline Sign incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  if (!all_in_window(kInCircleMin, kInCircleMax, a, b, c, d)) return incircle_wide(a, b, c, d);
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = kInCircleBound * permanent;
  if (det > bound || -det > bound) return sign_of(det);
  return incircle_exact(a, b, c, d);
}

}  // namespace detail

/// Exact sign of the orientation determinant; Positive iff c lies strictly
/// left of the directed line a->b.
inline Sign orient2d(const Point& a, const Point& b, const Point& c) {
  if (!detail::all_in_window(detail::kOrientMin, detail::kOrientMax, a, b, c)) {
    return detail::orient2d_wide(a, b, c);
  }
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;
  const double bound = detail::kOrientBound * (std::abs(detleft) + std::abs(detright));
  if (det > bound || -det > bound) return sign_of(det);
  return detail::orient2d_exact(a, b, c);
}

/// Exact in-circle test. Positive iff p lies strictly inside the circumcircle
/// of the counterclockwise triangle (a, b, c). Throws std::invalid_argument if
/// (a, b, c) is not counterclockwise.
inline Sign in_circle(const Point& a, const Point& b, const Point& c, const Point& p) {
  if (orient2d(a, b, c) != Sign::Positive) {
    throw std::invalid_argument("in_circle: triangle is not counterclockwise");
  }
  return detail::incircle(a, b, c, p);
}

struct Containment {
  enum class Kind { Inside, OnEdge, AtVertex, Outside };
  Kind kind = Kind::Outside;
  /// Edge index (0 = ab, 1 = bc, 2 = ca) for OnEdge; vertex index for AtVertex.
  int which = -1;

  friend bool operator==(const Containment&, const Containment&) = default;
};

/// Classifies p against the counterclockwise triangle (a, b, c).
inline Containment point_in_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
  const std::array<Sign, 3> s{orient2d(a, b, p), orient2d(b, c, p), orient2d(c, a, p)};
  int zeros = 0;
  int zero_edge = -1;
  for (int i = 0; i < 3; ++i) {
    if (s[i] == Sign::Negative) return {Containment::Kind::Outside, -1};
    if (s[i] == Sign::Zero) {
      ++zeros;
      zero_edge = i;
    }
  }
  if (zeros == 0) return {Containment::Kind::Inside, -1};
  if (zeros == 1) return {Containment::Kind::OnEdge, zero_edge};
  // Two zero edges meet at the shared vertex: ab&bc -> b, bc&ca -> c, ca&ab -> a.
  if (s[0] == Sign::Zero && s[1] == Sign::Zero) return {Containment::Kind::AtVertex, 1};
  if (s[1] == Sign::Zero && s[2] == Sign::Zero) return {Containment::Kind::AtVertex, 2};
  return {Containment::Kind::AtVertex, 0};
}

/// True iff p lies strictly between a and b, given that a, b, p are collinear.
inline bool strictly_between(const Point& a, const Point& b, const Point& p) {
  if (a.x != b.x) return (a.x < p.x && p.x < b.x) || (b.x < p.x && p.x < a.x);
  return (a.y < p.y && p.y < b.y) || (b.y < p.y && p.y < a.y);
}

/// Sign of the dot product (q - p) . (b - a) for collinear p, q and a, b on a
/// common line; exact because only coordinate comparisons are involved.
inline Sign collinear_direction(const Point& p, const Point& q, const Point& a, const Point& b) {
  auto step = [](double from, double to) { return to > from ? 1 : (to < from ? -1 : 0); };
  if (a.x != b.x) return static_cast<Sign>(step(a.x, b.x) * step(p.x, q.x));
  return static_cast<Sign>(step(a.y, b.y) * step(p.y, q.y));
}

struct Box {
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void expand(const Point& p) {
    xmin = std::min(xmin, p.x);
    ymin = std::min(ymin, p.y);
    xmax = std::max(xmax, p.x);
    ymax = std::max(ymax, p.y);
  }
  void expand(const Box& b) {
    xmin = std::min(xmin, b.xmin);
    ymin = std::min(ymin, b.ymin);
    xmax = std::max(xmax, b.xmax);
    ymax = std::max(ymax, b.ymax);
  }
  bool empty() const { return xmin > xmax; }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diagonal() const { return std::hypot(width(), height()); }
  /// Half the diagonal.
  double radius() const { return 0.5 * diagonal(); }

  static Box of(std::span<const Point> pts) {
    Box b;
    for (const Point& p : pts) b.expand(p);
    return b;
  }
};

inline double squared_distance(const Point& p, const Box& b) {
  const double dx = p.x < b.xmin ? b.xmin - p.x : (p.x > b.xmax ? p.x - b.xmax : 0.0);
  const double dy = p.y < b.ymin ? b.ymin - p.y : (p.y > b.ymax ? p.y - b.ymax : 0.0);
  return dx * dx + dy * dy;
}

inline double distance(const Box& a, const Box& b) {
  const double dx = std::max({0.0, a.xmin - b.xmax, b.xmin - a.xmax});
  const double dy = std::max({0.0, a.ymin - b.ymax, b.ymin - a.ymax});
  return std::hypot(dx, dy);
}

struct GridPoint {
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Maps `box` onto the integer grid [0, 2^bits - 1]^2 by floor, using one
/// common cell size so that grid cells stay square. Points on the maximum
/// boundary clamp into the last cell.
inline std::vector<GridPoint> quantize(std::span<const Point> points, unsigned bits, const Box& box) {
  if (points.empty()) throw std::invalid_argument("quantize: empty input");
  if (bits < 1 || bits > 32) throw std::invalid_argument("quantize: bits must be in [1, 32]");
  const double cells = std::ldexp(1.0, static_cast<int>(bits));
  const double extent = std::max(box.width(), box.height());
  const double scale = extent > 0.0 ? cells / extent : 0.0;
  const auto top = static_cast<std::uint64_t>(cells) - 1;
  auto cell = [&](double v, double lo) {
    const double f = std::floor((v - lo) * scale);
    if (!(f > 0.0)) return std::uint32_t{0};
    return static_cast<std::uint32_t>(std::min<double>(f, static_cast<double>(top)));
  };
  std::vector<GridPoint> out;
  out.reserve(points.size());
  for (const Point& p : points) out.push_back({cell(p.x, box.xmin), cell(p.y, box.ymin)});
  return out;
}

inline std::vector<GridPoint> quantize(std::span<const Point> points, unsigned bits) {
  if (points.empty()) throw std::invalid_argument("quantize: empty input");
  return quantize(points, bits, Box::of(points));
}

}  // namespace nngdt
