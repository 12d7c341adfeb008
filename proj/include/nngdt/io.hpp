#pragma once

// Text formats, input generators, counters export and SVG rendering.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nngdt/driver.hpp"
#include "nngdt/geometry.hpp"
#include "nngdt/oracle.hpp"

namespace nngdt {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits on runs of blanks.
inline std::vector<std::string_view> fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

inline std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("error writing " + path);
}

}  // namespace detail

/// "x y" per line; blank lines and lines starting with '#' are skipped.
inline std::vector<Point> parse_points(std::istream& in, const std::string& source = "<points>") {
  std::vector<Point> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto f = detail::fields(s);
    if (f.size() != 2) throw ParseError(source, number, "expected two coordinates");
    Point p;
    if (!detail::parse_number(f[0], p.x) || !detail::parse_number(f[1], p.y)) {
      throw ParseError(source, number, "malformed number");
    }
    if (!is_finite(p)) throw ParseError(source, number, "non-finite coordinate");
    out.push_back(p);
  }
  return out;
}

inline std::vector<Point> read_points(const std::string& path) {
  std::ifstream in = detail::open_in(path);
  return parse_points(in, path);
}

inline std::string format_points(std::span<const Point> points) {
  std::string out;
  for (const Point& p : points) {
    out += detail::format_double(p.x);
    out += ' ';
    out += detail::format_double(p.y);
    out += '\n';
  }
  return out;
}

/// "i j k" per line; '#' lines are comments. Indices must be below `point_count`.
inline std::vector<IndexTriangle> parse_triangles(std::istream& in, std::size_t point_count,
                                                  const std::string& source = "<triangles>") {
  std::vector<IndexTriangle> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto f = detail::fields(s);
    if (f.size() != 3) throw ParseError(source, number, "expected three indices");
    IndexTriangle t{};
    for (int i = 0; i < 3; ++i) {
      if (!detail::parse_number(f[i], t[i])) throw ParseError(source, number, "malformed index");
      if (t[i] >= point_count) throw ParseError(source, number, "index out of range");
    }
    out.push_back(t);
  }
  return out;
}

inline std::vector<IndexTriangle> read_triangles(const std::string& path, std::size_t point_count) {
  std::ifstream in = detail::open_in(path);
  return parse_triangles(in, point_count, path);
}

inline std::string format_triangles(std::span<const IndexTriangle> triangles) {
  std::string out;
  for (const IndexTriangle& t : triangles) {
    out += std::to_string(t[0]) + ' ' + std::to_string(t[1]) + ' ' + std::to_string(t[2]) + '\n';
  }
  return out;
}

enum class Distribution { UniformSquare, Clustered, GridJitter };

inline Distribution parse_distribution(std::string_view name) {
  if (name == "uniform-square") return Distribution::UniformSquare;
  if (name == "clustered") return Distribution::Clustered;
  if (name == "grid-jitter") return Distribution::GridJitter;
  throw std::invalid_argument("unknown distribution '" + std::string(name) + "'");
}

namespace detail {

// 53 random bits mapped to [0, 1); independent of the standard library's
// distribution implementations.
inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

inline double gaussian(std::mt19937_64& rng) {
  double u = unit(rng);
  while (u == 0.0) u = unit(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * 3.14159265358979323846 * unit(rng));
}

}  // namespace detail

/// Deterministic for fixed (dist, n, seed). Uniform and jittered grid points
/// lie in [0, 1]^2; clustered points are Gaussian blobs around centers in it.
inline std::vector<Point> generate(Distribution dist, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate: need at least one point");
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(n);
  switch (dist) {
    case Distribution::UniformSquare:
      for (std::size_t i = 0; i < n; ++i) {
        const double x = detail::unit(rng);
        out.push_back({x, detail::unit(rng)});
      }
      break;
    case Distribution::Clustered: {
      const std::size_t clusters = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(n)) / 4));
      const double sigma = 0.02 / std::sqrt(double(clusters));
      std::vector<Point> centers;
      for (std::size_t c = 0; c < clusters; ++c) {
        const double x = detail::unit(rng);
        centers.push_back({x, detail::unit(rng)});
      }
      for (std::size_t i = 0; i < n; ++i) {
        const Point& c = centers[rng() % clusters];
        const double dx = detail::gaussian(rng);
        out.push_back({c.x + sigma * dx, c.y + sigma * detail::gaussian(rng)});
      }
      break;
    }
    case Distribution::GridJitter: {
      const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(double(n))));
      const double cell = 1.0 / double(side);
      for (std::size_t i = 0; i < n; ++i) {
        const double jx = detail::unit(rng) - 0.5;
        const double jy = detail::unit(rng) - 0.5;
        out.push_back({(double(i % side) + 0.5 + 0.5 * jx) * cell, (double(i / side) + 0.5 + 0.5 * jy) * cell});
      }
      break;
    }
  }
  return out;
}

/// One row per (round, phase): calls and work units.
///   nng-build  builds, total input size
///   history    descents, history nodes visited
///   walk       walks, triangles stepped through
///   conflict   containment searches, conflict tests
///   insert     insertions, cavity triangles
inline std::string format_counters_csv(const Counters& counters) {
  std::ostringstream out;
  out << "round,phase,calls,work\n";
  for (const RoundCounters& r : counters.rounds) {
    std::uint64_t nng = 0;
    for (const NngBuild& b : r.nng_builds) nng += b.size;
    const WorkCounters w = [&] {
      WorkCounters s = r.locate;
      const WorkCounters& i = r.insert;
      s.history_descents += i.history_descents;
      s.history_visits += i.history_visits;
      s.walks += i.walks;
      s.walk_steps += i.walk_steps;
      s.containment_searches += i.containment_searches;
      s.conflict_tests += i.conflict_tests;
      s.insertions += i.insertions;
      s.cavity_triangles += i.cavity_triangles;
      return s;
    }();
    out << r.round << ",nng-build," << r.nng_builds.size() << ',' << nng << '\n';
    out << r.round << ",history," << w.history_descents << ',' << w.history_visits << '\n';
    out << r.round << ",walk," << w.walks << ',' << w.walk_steps << '\n';
    out << r.round << ",conflict," << w.containment_searches << ',' << w.conflict_tests << '\n';
    out << r.round << ",insert," << w.insertions << ',' << w.cavity_triangles << '\n';
  }
  return out.str();
}

/// Each undirected edge once, y pointing up, 5% margin around the bounding box.
inline std::string render_svg(std::span<const Point> points, std::span<const IndexTriangle> triangles) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const IndexTriangle& t : triangles) {
    for (int e = 0; e < 3; ++e) {
      const std::uint32_t a = t[e];
      const std::uint32_t b = t[(e + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  Box box = points.empty() ? Box{} : Box::of(points);
  if (points.empty()) box.expand(Point{0, 0});
  double extent = std::max(box.width(), box.height());
  if (extent == 0.0) extent = 1.0;
  const double margin = 0.05 * extent;
  const double stroke = extent / 500.0;
  auto num = [](double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf, static_cast<std::size_t>(len));
  };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(box.xmin - margin) << ' '
      << num(-box.ymax - margin) << ' ' << num(box.width() + 2 * margin) << ' ' << num(box.height() + 2 * margin)
      << "\">\n";
  out << "<g stroke=\"black\" stroke-width=\"" << num(stroke) << "\" fill=\"none\">\n";
  for (const auto& [a, b] : edges) {
    out << "<line x1=\"" << num(points[a].x) << "\" y1=\"" << num(-points[a].y) << "\" x2=\"" << num(points[b].x)
        << "\" y2=\"" << num(-points[b].y) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

inline void write_svg(const std::string& path, std::span<const Point> points,
                      std::span<const IndexTriangle> triangles) {
  detail::write_file(path, render_svg(points, triangles));
}

}  // namespace nngdt
