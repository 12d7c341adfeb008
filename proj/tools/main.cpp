// nngdt command-line tool: generate, triangulate, verify, bench, spread.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nngdt/driver.hpp"
#include "nngdt/io.hpp"
#include "nngdt/nng.hpp"
#include "nngdt/oracle.hpp"

namespace {

using namespace nngdt;

constexpr std::size_t kExhaustiveCircleLimit = 2000;

Ingested load(const std::string& path) {
  const std::vector<Point> raw = read_points(path);
  Ingested in = ingest(raw);
  if (!in.duplicates.empty()) {
    std::cerr << "note: dropped " << in.duplicates.size() << " duplicate point(s); entry "
              << in.duplicates.front().first << " repeats entry " << in.duplicates.front().second << "\n";
  }
  return in;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    detail::write_file(path, content);
  }
}

struct GenerateArgs {
  std::string dist = "uniform-square";
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_generate(const GenerateArgs& a) {
  const std::vector<Point> pts = generate(parse_distribution(a.dist), a.n, a.seed);
  emit(a.output, format_points(pts));
  return 0;
}

struct TriangulateArgs {
  std::string input;
  std::string output;
  std::uint64_t seed = 1;
  std::uint32_t round_base = kDefaultRoundBase;
  std::string svg;
  std::string counters;
};

int cmd_triangulate(const TriangulateArgs& a) {
  const Ingested in = load(a.input);
  const RunResult r = run(in.points, {.seed = a.seed, .round_base = a.round_base});
  const std::vector<IndexTriangle> tris = r.triangles();
  emit(a.output, format_triangles(tris));
  if (!a.svg.empty()) write_svg(a.svg, in.points, tris);
  if (!a.counters.empty()) detail::write_file(a.counters, format_counters_csv(r.counters));
  return 0;
}

struct VerifyArgs {
  std::string points;
  std::string triangles;
};

int cmd_verify(const VerifyArgs& a) {
  const Ingested in = load(a.points);
  const std::vector<IndexTriangle> tris = read_triangles(a.triangles, in.points.size());
  const std::size_t n = in.points.size();
  OracleReport report = check_delaunay_property(in.points, tris, {.exhaustive = n <= kExhaustiveCircleLimit});
  report.merge(check_euler(in.points, tris));
  if (n >= 3 && n <= kBruteDelaunayMaxPoints) {
    const BruteDelaunayResult brute = brute_delaunay_detailed(in.points);
    std::vector<IndexTriangle> mine;
    for (const IndexTriangle& t : tris) mine.push_back(rotate_smallest_first(t));
    std::sort(mine.begin(), mine.end());
    if (!brute.cocircular && mine != brute.triangles) {
      std::ostringstream w;
      w << "brute-force triangulation has " << brute.triangles.size() << " triangles; sets differ";
      report.add("brute-force", w.str());
    }
  }
  if (report.passed()) {
    std::cout << "ok: " << tris.size() << " triangles on " << n << " points\n";
    return 0;
  }
  for (const Violation& v : report.violations) std::cout << "FAIL " << v.check << ": " << v.witness << "\n";
  return 1;
}

struct BenchArgs {
  std::string dist = "uniform-square";
  std::vector<std::size_t> sizes;
  std::uint32_t seeds = 1;
  std::uint32_t round_base = kDefaultRoundBase;
  bool plain = false;
};

int cmd_bench(const BenchArgs& a) {
  const Distribution dist = parse_distribution(a.dist);
  std::cout << "N,seed,rounds,nng_builds,nng_points,history_visits,walk_steps,conflict_tests,cavity_triangles,"
               "location_work,wall_ms,work_per_n";
  if (a.plain) std::cout << ",plain_history_per_n";
  std::cout << "\n";
  for (std::size_t n : a.sizes) {
    for (std::uint32_t s = 0; s < a.seeds; ++s) {
      const Ingested in = ingest(generate(dist, n, s));
      const auto t0 = std::chrono::steady_clock::now();
      const RunResult r = run(in.points, {.seed = s, .round_base = a.round_base});
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      const WorkCounters& w = r.counters.total;
      char tail[64];
      std::snprintf(tail, sizeof tail, "%.3f,%.4f", ms, r.counters.location_work_per_point());
      std::cout << in.points.size() << ',' << s << ',' << r.plan.rounds() << ',' << r.counters.nng_builds() << ','
                << r.counters.nng_points() << ',' << w.history_visits << ',' << w.walk_steps << ','
                << w.conflict_tests << ',' << w.cavity_triangles << ',' << w.location_work() << ',' << tail;
      if (a.plain) {
        const RunResult p = run_plain(in.points, s);
        char col[32];
        std::snprintf(col, sizeof col, ",%.4f",
                      static_cast<double>(p.counters.total.history_visits) / static_cast<double>(in.points.size()));
        std::cout << col;
      }
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_spread(const std::string& input) {
  const Ingested in = load(input);
  const SpreadReport r = compute_spread(in.points);
  std::printf("points %zu\nmin_distance %.17g\nmax_distance %.17g\nspread %.17g\napproximation_factor %.6f\n",
              in.points.size(), r.min_distance, r.max_distance, r.spread, r.approximation_factor);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delaunay triangulation by nearest-neighbor-graph point location"};
  app.require_subcommand(1);
  const std::vector<std::string> dists{"uniform-square", "clustered", "grid-jitter"};

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a random point set");
  generate_cmd->add_option("--dist", gen.dist, "Distribution")->check(CLI::IsMember(dists));
  generate_cmd->add_option("N", gen.n, "Number of points")->required()->check(CLI::PositiveNumber);
  generate_cmd->add_option("seed", gen.seed, "Random seed")->required();
  generate_cmd->add_option("-o,--output", gen.output, "Output file (default stdout)");

  TriangulateArgs tri;
  auto* triangulate_cmd = app.add_subcommand("triangulate", "Triangulate a point file");
  triangulate_cmd->add_option("--input", tri.input, "Points file")->required();
  triangulate_cmd->add_option("--output", tri.output, "Triangles file (default stdout)");
  triangulate_cmd->add_option("--seed", tri.seed, "Insertion-order seed");
  triangulate_cmd->add_option("--round-base", tri.round_base, "Size of the first round")->check(CLI::Range(3u, 1u << 30));
  triangulate_cmd->add_option("--svg", tri.svg, "Also render the triangulation as SVG");
  triangulate_cmd->add_option("--counters", tri.counters, "Also write work counters as CSV");

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Check a triangulation against its points");
  verify_cmd->add_option("--points", ver.points, "Points file")->required();
  verify_cmd->add_option("--triangles", ver.triangles, "Triangles file")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Instrumented runs over sizes and seeds, as CSV");
  bench_cmd->add_option("--dist", bench.dist, "Distribution")->check(CLI::IsMember(dists));
  bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated sizes")->required()->delimiter(',');
  bench_cmd->add_option("--seeds", bench.seeds, "Seeds per size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--round-base", bench.round_base, "Size of the first round")->check(CLI::Range(3u, 1u << 30));
  bench_cmd->add_flag("--plain", bench.plain, "Also run history-only insertion");

  std::string spread_input;
  auto* spread_cmd = app.add_subcommand("spread", "Print the spread of a point file");
  spread_cmd->add_option("--input", spread_input, "Points file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate_cmd) return cmd_generate(gen);
    if (*triangulate_cmd) return cmd_triangulate(tri);
    if (*verify_cmd) return cmd_verify(ver);
    if (*bench_cmd) return cmd_bench(bench);
    if (*spread_cmd) return cmd_spread(spread_input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
