// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nngdt/driver.hpp"
#include "nngdt/io.hpp"
#include "nngdt/nng.hpp"
#include "nngdt/oracle.hpp"
#include "nngdt/wspd.hpp"

namespace {

using namespace nngdt;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int number, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = secs < limit_seconds;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s %d %s: %s; %.1f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", number, name, o.detail.c_str(), secs,
              limit_seconds);
  std::fflush(stdout);
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::vector<Point> lattice(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::uint32_t side = static_cast<std::uint32_t>(std::ceil(std::sqrt(4.0 * double(n))));
  std::vector<bool> used(std::size_t{side} * side, false);
  std::vector<Point> pts;
  while (pts.size() < n) {
    const std::uint32_t c = static_cast<std::uint32_t>(rng() % used.size());
    if (used[c]) continue;
    used[c] = true;
    pts.push_back({double(c % side), double(c / side)});
  }
  return pts;
}

Outcome oracle_equivalence() {
  int exact = 0;
  int cocircular = 0;
  int mismatches = 0;
  for (std::size_t n : {10u, 50u, 200u}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const std::vector<Point> pts = ingest(generate(Distribution::UniformSquare, n, seed)).points;
      const std::vector<IndexTriangle> mine = run(pts, {.seed = seed}).triangles();
      const BruteDelaunayResult brute = brute_delaunay_detailed(pts);
      if (brute.cocircular) {
        ++cocircular;
        if (!check_delaunay_property(pts, mine).passed()) ++mismatches;
      } else if (mine == brute.triangles) {
        ++exact;
      } else {
        ++mismatches;
      }
    }
  }
  return {mismatches == 0, format("%d exact matches, %d cocircular validated, %d mismatches", exact, cocircular, mismatches)};
}

Outcome nng_exactness() {
  int runs = 0;
  int mismatches = 0;
  int tie_runs = 0;
  for (std::size_t n : {100u, 2000u}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      // Every fifth input is an integer lattice sample, full of equal distances.
      const bool ties = seed % 5 == 4;
      const std::vector<Point> pts = ties ? lattice(n, seed) : generate(Distribution::UniformSquare, n, seed);
      tie_runs += ties;
      ++runs;
      if (nearest_neighbor_graph(pts).nn != brute_nng(pts).nn) ++mismatches;
    }
  }
  return {mismatches == 0, format("%d inputs (%d with ties), %d mismatches", runs, tie_runs, mismatches)};
}

Outcome wspd_validity() {
  std::size_t pairs_total = 0;
  std::size_t bad_cover = 0;
  std::size_t bad_separation = 0;
  for (std::size_t n : {2u, 100u, 500u}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto pts = generate(seed % 2 ? Distribution::Clustered : Distribution::UniformSquare, n, seed);
      const Ingested in = ingest(pts);
      const CompressedQuadtree t = build_compressed_quadtree(in.points);
      const std::vector<WspdPair> pairs = compute_wspd(t, 2.5);
      pairs_total += pairs.size();
      const std::size_t m = t.point_count();
      std::vector<std::uint8_t> cover(m * m, 0);
      for (const WspdPair& p : pairs) {
        Box a, b;
        for (std::uint32_t i = p.a.begin; i < p.a.end; ++i) a.expand(t.sorted_points[i]);
        for (std::uint32_t j = p.b.begin; j < p.b.end; ++j) b.expand(t.sorted_points[j]);
        const double dx = std::max({0.0, b.xmin - a.xmax, a.xmin - b.xmax});
        const double dy = std::max({0.0, b.ymin - a.ymax, a.ymin - b.ymax});
        const double r = 0.5 * std::max(std::hypot(a.xmax - a.xmin, a.ymax - a.ymin),
                                        std::hypot(b.xmax - b.xmin, b.ymax - b.ymin));
        if (std::hypot(dx, dy) < 2.5 * r) ++bad_separation;
        for (std::uint32_t i = p.a.begin; i < p.a.end; ++i) {
          for (std::uint32_t j = p.b.begin; j < p.b.end; ++j) ++cover[std::min(i, j) * m + std::max(i, j)];
        }
      }
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) bad_cover += cover[i * m + j] != 1;
      }
    }
  }
  return {bad_cover == 0 && bad_separation == 0,
          format("%zu pairs checked, %zu point pairs not covered exactly once, %zu pairs under separation 2.5",
                 pairs_total, bad_cover, bad_separation)};
}

Outcome structural_invariants() {
  InvariantReport total;
  std::size_t circle_failures = 0;
  std::size_t runs = 0;
  std::size_t seedless = 0;
  for (Distribution d : {Distribution::UniformSquare, Distribution::Clustered, Distribution::GridJitter}) {
    for (std::size_t n : {200u, 2000u, 30000u}) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const std::vector<Point> pts = ingest(generate(d, n, seed)).points;
        RunResult r = [&] {
          try {
            return run(pts, {.seed = seed, .round_base = 8, .check_invariants = true});
          } catch (const std::logic_error&) {
            ++seedless;
            throw;
          }
        }();
        ++runs;
        const InvariantReport& i = r.invariants;
        total.halving_violations += i.halving_violations;
        total.unseeded_components += i.unseeded_components;
        total.hint_violations += i.hint_violations;
        total.walk_conflict_checks += i.walk_conflict_checks;
        total.walk_conflict_violations += i.walk_conflict_violations;
        total.euler_violations += i.euler_violations;
        const OracleReport c = check_delaunay_property(pts, r.triangles(), {.exhaustive = n <= 2000});
        circle_failures += !c.passed();
      }
    }
  }
  const bool ok = total.clean() && circle_failures == 0 && seedless == 0;
  return {ok, format("%zu runs; Euler %llu, empty-circle %zu, halving %llu, unseeded %llu, hint %llu, "
                     "walk conflicts %llu of %llu crossed triangles",
                     runs, (unsigned long long)total.euler_violations, circle_failures,
                     (unsigned long long)total.halving_violations, (unsigned long long)total.unseeded_components,
                     (unsigned long long)total.hint_violations, (unsigned long long)total.walk_conflict_violations,
                     (unsigned long long)total.walk_conflict_checks)};
}

struct ScalingRow {
  std::size_t n = 0;
  double work_per_point = 0;
  double plain_history_per_point = 0;
};

std::vector<ScalingRow> scaling_rows;
std::size_t cost_violations = 0;
std::size_t cost_runs = 0;
std::string first_cost_violation;

Outcome linear_scaling() {
  for (unsigned e = 12; e <= 17; ++e) {
    ScalingRow row;
    row.n = std::size_t{1} << e;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const std::vector<Point> pts = generate(Distribution::UniformSquare, row.n, 1000 + seed);
      const RunResult r = run(pts, {.seed = seed, .round_base = 32});
      row.work_per_point += r.counters.location_work_per_point() / 5;
      const CostReport c = validate_cost_profile(r.counters, r.plan);
      ++cost_runs;
      cost_violations += c.violations.size();
      if (!c.ok() && first_cost_violation.empty()) first_cost_violation = c.violations.front();
      const RunResult p = run_plain(pts, seed);
      row.plain_history_per_point += double(p.counters.total.history_visits) / double(row.n) / 5;
    }
    scaling_rows.push_back(row);
    std::printf("     N=%-7zu location work/N %.3f  plain history visits/N %.3f\n", row.n, row.work_per_point,
                row.plain_history_per_point);
  }
  const double ratio = scaling_rows.back().work_per_point / scaling_rows.front().work_per_point;
  const double plain = scaling_rows.back().plain_history_per_point / scaling_rows.front().plain_history_per_point;
  return {ratio <= 2.5 && plain >= 1.3,
          format("work/N ratio 2^17 vs 2^12 = %.3f (bound 2.5); plain history/N ratio = %.3f (needs >= 1.3)", ratio,
                 plain)};
}

Outcome cost_profile() {
  // Reuses the scaling runs and adds clustered inputs.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (std::size_t n : {5000u, 50000u}) {
      const std::vector<Point> pts = ingest(generate(Distribution::Clustered, n, seed)).points;
      const RunResult r = run(pts, {.seed = seed, .round_base = 32});
      const CostReport c = validate_cost_profile(r.counters, r.plan);
      ++cost_runs;
      cost_violations += c.violations.size();
      if (!c.ok() && first_cost_violation.empty()) first_cost_violation = c.violations.front();
    }
  }
  std::string detail = format("%zu runs, %zu violations", cost_runs, cost_violations);
  if (!first_cost_violation.empty()) detail += " (first: " + first_cost_violation + ")";
  return {cost_violations == 0 && cost_runs > 0, detail};
}

Outcome determinism() {
  int differing = 0;
  int cases = 0;
  for (Distribution d : {Distribution::UniformSquare, Distribution::Clustered, Distribution::GridJitter}) {
    const std::vector<Point> pts = ingest(generate(d, 20000, 77)).points;
    const RunResult a = run(pts, {.seed = 5, .round_base = 32});
    const RunResult b = run(pts, {.seed = 5, .round_base = 32});
    ++cases;
    if (format_triangles(a.triangles()) != format_triangles(b.triangles()) ||
        format_counters_csv(a.counters) != format_counters_csv(b.counters)) {
      ++differing;
    }
  }
  return {differing == 0, format("%d inputs run twice, %d differ in triangles or counters", cases, differing)};
}

}  // namespace

int main() {
  criterion(1, "oracle-equivalence", 120, oracle_equivalence);
  criterion(2, "nng-exactness", 30, nng_exactness);
  criterion(3, "wspd-validity", 60, wspd_validity);
  criterion(4, "structural-invariants", 600, structural_invariants);
  criterion(6, "linear-scaling", 600, linear_scaling);
  criterion(5, "cost-profile", 600, cost_profile);
  criterion(7, "determinism", 120, determinism);
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
