// Acceptance gate: prints one PASS/FAIL line per criterion and exits non-zero
// if any fails. Tolerances are pinned below.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gridweave/bench.hpp"
#include "gridweave/geometry.hpp"
#include "gridweave/global_assign.hpp"
#include "gridweave/io.hpp"
#include "gridweave/lap.hpp"
#include "gridweave/measures.hpp"
#include "gridweave/pipeline.hpp"
#include "oracles.hpp"

using namespace gridweave;
namespace oracle = gridweave::oracle;

namespace {

constexpr double kShapeTol = 1e-9;        // fixture scores vs oracle and closed forms
constexpr double kTieTol = 1e-12;         // ">=" between means of equal values
constexpr double kEndGap = 0.01;          // triple ratio G_L_T over BASELINE
constexpr double kMinProximity = 0.98;
constexpr double kTripleTrendSlack = 0.01;
constexpr double kPerimeterSpread = 0.03;
constexpr double kSuiteSeconds = 600.0;
constexpr double kAdaptiveRunSeconds = 30.0;
constexpr int kFasterSeeds = 9;
constexpr int kMaxAdaptiveSolves = 20;
constexpr int kMedianAdaptiveSolves = 8;
constexpr int kTimingRepeats = 3;         // best-of wall time per global phase
constexpr double kFixedLambda = 0.5;      // preset weight, the library default

int failures = 0;

void verdict(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %s  [%s]\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void info(const std::string& text) {
  std::printf("INFO  %s\n", text.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- oracle equivalence ----

void lap_oracle() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> value(0, 1000);
  const auto t0 = std::chrono::steady_clock::now();
  int matched = 0;
  for (int trial = 0; trial < 200; ++trial) {
    CostMatrix c(8, 8);
    for (double& v : c.values) v = value(rng);
    std::vector<int> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
      double s = 0.0;
      for (int i = 0; i < 8; ++i) s += c.at(i, perm[i]);
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const LapSolution sol = solve_lap(c);
    double total = 0.0;
    for (int i = 0; i < 8; ++i) total += c.at(i, sol.col_of_row[i]);
    matched += total == best && sol.total_cost == best;
  }
  const double secs = seconds_since(t0);
  verdict(matched == 200 && secs < 10.0, "oracle: LAP 8x8 equals exhaustive minimum",
          fmt("%d/200 exact, %.2f s", matched, secs));
}

void hull_oracle() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> coord(0, 15);
  int matched = 0, trials = 0;
  while (trials < 200) {
    std::vector<LatticePoint> pts(30);
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    ++trials;
    const Polygon h = convex_hull(pts);
    matched += std::set<LatticePoint>(h.vertices.begin(), h.vertices.end()) ==
                   oracle::brute_hull_vertices(pts) &&
               std::set<LatticePoint>(h.vertices.begin(), h.vertices.end()).size() == h.vertices.size();
  }
  verdict(matched == 200, "oracle: convex hull equals brute-force hull", fmt("%d/200 exact", matched));
}

void shape_oracles() {
  const std::vector<Cell> tromino{{0, 0}, {1, 0}, {0, 1}};
  struct Expect {
    ConvexityMeasure m;
    double closed_form;
    double oracle_value;
  };
  const Expect expected[] = {
      {ConvexityMeasure::Area, 3.0 / 3.5, oracle::area_ratio(tromino)},
      {ConvexityMeasure::Perimeter, (6.0 + std::sqrt(2.0)) / 8.0, oracle::perimeter_ratio(tromino)},
      {ConvexityMeasure::Triple, 1.0, oracle::triple_ratio(tromino)},
      {ConvexityMeasure::Cut, 11.0 / 12.0, oracle::cut_ratio(tromino)},
  };
  for (const Expect& e : expected) {
    const double got = convexity(tromino, e.m);
    const bool ok = std::abs(got - e.closed_form) <= kShapeTol && std::abs(got - e.oracle_value) <= kShapeTol;
    verdict(ok, fmt("oracle: L-tromino %s", std::string(to_string(e.m)).c_str()),
            fmt("got %.12f, closed form %.12f, oracle %.12f", got, e.closed_form, e.oracle_value));
  }
  const std::vector<Cell> u{{0, 0}, {1, 0}, {2, 0}, {0, 1}, {2, 1}};
  const double t = convexity(u, ConvexityMeasure::Triple);
  verdict(t == 0.5 && oracle::triple_ratio(u) == 0.5, "oracle: U-pentomino triple is exactly 0.5",
          fmt("got %.17g", t));
}

// ---- synthetic suite ----

struct Means {
  MeasureReport r{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  int n = 0;
};

std::map<PipelineId, Means> pooled(const BenchResult& res, int grid = 0) {
  std::map<PipelineId, Means> out;
  for (const BenchRow& row : res.rows) {
    if (grid && row.grid != grid) continue;
    Means& m = out[row.pipeline];
    m.r.proximity += row.report.proximity;
    m.r.compactness += row.report.compactness;
    m.r.area_ratio += row.report.area_ratio;
    m.r.triple_ratio += row.report.triple_ratio;
    m.r.perimeter_ratio += row.report.perimeter_ratio;
    m.r.cut_ratio += row.report.cut_ratio;
    ++m.n;
  }
  for (auto& [p, m] : out) {
    m.r.proximity /= m.n;
    m.r.compactness /= m.n;
    m.r.area_ratio /= m.n;
    m.r.triple_ratio /= m.n;
    m.r.perimeter_ratio /= m.n;
    m.r.cut_ratio /= m.n;
  }
  return out;
}

const char* name(PipelineId p) { return to_string(p).data(); }

void suite_orderings(const BenchResult& res, double suite_secs) {
  const auto m = pooled(res);
  const auto& base = m.at(PipelineId::Baseline).r;
  const auto& g = m.at(PipelineId::G).r;
  const auto& glt = m.at(PipelineId::G_L_T).r;
  const auto& glp = m.at(PipelineId::G_L_P).r;

  bool base_exact = true;
  for (const BenchRow& row : res.rows)
    if (row.pipeline == PipelineId::Baseline) base_exact = base_exact && row.report.proximity == 1.0;
  verdict(base_exact && base.proximity == 1.0, "suite: BASELINE proximity is exactly 1",
          fmt("mean %.17g", base.proximity));

  verdict(g.compactness >= base.compactness - kTieTol, "suite: compactness(G) >= compactness(BASELINE)",
          fmt("%.5f vs %.5f", g.compactness, base.compactness));

  verdict(glt.triple_ratio >= g.triple_ratio - kTieTol && g.triple_ratio >= base.triple_ratio - kTieTol &&
              glt.triple_ratio - base.triple_ratio >= kEndGap,
          "suite: triple G_L_T >= G >= BASELINE, ends apart by >= 0.01",
          fmt("%.5f / %.5f / %.5f", glt.triple_ratio, g.triple_ratio, base.triple_ratio));

  PipelineId best_p = PipelineId::Baseline, best_c = PipelineId::Baseline;
  for (const auto& [p, mm] : m) {
    if (mm.r.perimeter_ratio > m.at(best_p).r.perimeter_ratio) best_p = p;
    if (mm.r.cut_ratio > m.at(best_c).r.cut_ratio) best_c = p;
  }
  verdict(best_p == PipelineId::G_L_P, "suite: G_L_P has the highest perimeter ratio",
          fmt("G_L_P %.5f, best %s %.5f", glp.perimeter_ratio, name(best_p), m.at(best_p).r.perimeter_ratio));
  verdict(best_c == PipelineId::G_L_P, "suite: G_L_P has the highest cut ratio",
          fmt("G_L_P %.5f, best %s %.5f", glp.cut_ratio, name(best_c), m.at(best_c).r.cut_ratio));

  double worst = 1.0;
  PipelineId worst_p = PipelineId::G;
  for (const auto& [p, mm] : m)
    if (p != PipelineId::Baseline && mm.r.proximity < worst) worst = mm.r.proximity, worst_p = p;
  verdict(worst >= kMinProximity, "suite: proximity of every non-baseline pipeline >= 0.98",
          fmt("lowest %s %.5f", name(worst_p), worst));

  const auto& lt = m.at(PipelineId::L_T).r;
  const auto& lp = m.at(PipelineId::L_P).r;
  verdict(glt.triple_ratio >= lt.triple_ratio - kTieTol, "suite: triple(G_L_T) >= triple(L_T)",
          fmt("%.9f vs %.9f", glt.triple_ratio, lt.triple_ratio));
  verdict(glp.perimeter_ratio >= lp.perimeter_ratio - kTieTol, "suite: perimeter(G_L_P) >= perimeter(L_P)",
          fmt("%.5f vs %.5f", glp.perimeter_ratio, lp.perimeter_ratio));
  verdict(suite_secs < kSuiteSeconds, "suite: full suite under 10 minutes", fmt("%.1f s", suite_secs));

  for (int grid : {20, 30, 40}) {
    const auto per = pooled(res, grid);
    PipelineId bp = PipelineId::Baseline, bc = PipelineId::Baseline;
    for (const auto& [p, mm] : per) {
      if (mm.r.perimeter_ratio > per.at(bp).r.perimeter_ratio) bp = p;
      if (mm.r.cut_ratio > per.at(bc).r.cut_ratio) bc = p;
    }
    info(fmt("%dx%d: highest perimeter %s %.5f, highest cut %s %.5f (G_L_P cut %.5f)", grid, grid, name(bp),
             per.at(bp).r.perimeter_ratio, name(bc), per.at(bc).r.cut_ratio,
             per.at(PipelineId::G_L_P).r.cut_ratio));
  }
}

void size_trends(const BenchResult& res) {
  const auto at20 = pooled(res, 20), at30 = pooled(res, 30), at40 = pooled(res, 40);
  const double t20 = at20.at(PipelineId::G_L_T).r.triple_ratio;
  const double t40 = at40.at(PipelineId::G_L_T).r.triple_ratio;
  verdict(t40 >= t20 - kTripleTrendSlack, "size trend: triple(G_L_T) at 40x40 >= at 20x20 - 0.01",
          fmt("%.5f vs %.5f", t40, t20));
  const double p[] = {at20.at(PipelineId::G_L_P).r.perimeter_ratio, at30.at(PipelineId::G_L_P).r.perimeter_ratio,
                      at40.at(PipelineId::G_L_P).r.perimeter_ratio};
  const double spread = *std::max_element(p, p + 3) - *std::min_element(p, p + 3);
  verdict(spread < kPerimeterSpread, "size trend: perimeter(G_L_P) varies < 0.03 across sizes",
          fmt("%.5f / %.5f / %.5f, spread %.5f", p[0], p[1], p[2], spread));
}

void lambda_schedule(const BenchResult& res, bool& all_valid) {
  {
    const SampleSet s = gen_synthetic(5, 900, 0.05, 0);
    const auto t0 = std::chrono::steady_clock::now();
    const PipelineResult r = run_pipeline(s, {30, 30}, PipelineId::G_L_T, 0);
    const double secs = seconds_since(t0);
    all_valid = all_valid && validate_layout(r.layout).ok();
    verdict(secs <= kAdaptiveRunSeconds, "lambda schedule: adaptive 30x30 G_L_T run <= 30 s", fmt("%.2f s", secs));
  }

  int faster = 0;
  bool exact_solves = true;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GridLayout in = baseline_grid_from_projection(gen_synthetic(5, 900, 0.05, seed), {30, 30});
    double adaptive_best = INFINITY, fixed_best = INFINITY;
    GlobalResult adaptive, fixed;
    for (int rep = 0; rep < kTimingRepeats; ++rep) {
      auto t0 = std::chrono::steady_clock::now();
      adaptive = global_assignment(in, LambdaSchedule::adaptive());
      adaptive_best = std::min(adaptive_best, seconds_since(t0));
      t0 = std::chrono::steady_clock::now();
      fixed = global_assignment(in, LambdaSchedule::fixed(kFixedLambda));
      fixed_best = std::min(fixed_best, seconds_since(t0));
    }
    all_valid = all_valid && validate_layout(adaptive.layout).ok() && validate_layout(fixed.layout).ok();
    const bool loop_only = fixed.anchor_solves == 0 && fixed.adaptive_solves == 0 &&
                           fixed.lap_solves == static_cast<int>(fixed.history.size()) &&
                           fixed.lap_solves >= 1 && fixed.lap_solves <= LambdaSchedule{}.fixed_rounds;
    exact_solves = exact_solves && loop_only;
    faster += fixed_best < adaptive_best;
    detail += fmt("%s%llu:%d/%d", seed ? " " : "", static_cast<unsigned long long>(seed), fixed.lap_solves,
                  adaptive.lap_solves);
  }
  verdict(exact_solves, "lambda schedule: fixed lambda issues only alternation-loop LAP solves",
          "seed:fixed/adaptive solves " + detail);
  verdict(faster >= kFasterSeeds, "lambda schedule: fixed lambda faster than adaptive in >= 9 of 10 seeds",
          fmt("%d/10", faster));

  std::vector<int> solves;
  int capped = 0;
  for (const BenchRow& row : res.rows)
    if (row.stats.adaptive_solves > 0) {
      solves.push_back(row.stats.adaptive_solves);
      capped += row.stats.adaptive_solves >= kMaxAdaptiveSolves;
    }
  std::sort(solves.begin(), solves.end());
  const double median = solves.empty() ? 0.0
                        : solves.size() % 2 ? solves[solves.size() / 2]
                                            : (solves[solves.size() / 2 - 1] + solves[solves.size() / 2]) / 2.0;
  verdict(!solves.empty() && capped == 0 && median <= kMedianAdaptiveSolves,
          "lambda schedule: adaptive lambda converges within 20 solves on every run, median <= 8",
          fmt("%zu runs, %d capped, median %.1f, max %d", solves.size(), capped, median,
              solves.empty() ? 0 : solves.back()));
}

// ---- phase invariants ----

std::string fingerprint(const PipelineResult& r, const SampleSet& s) {
  std::ostringstream out;
  out << layout_to_json(r.layout, s) << report_to_json(r.report);
  for (const SwapRecord& w : r.swap_log) out << w.a << ' ' << w.b << ' ' << w.gain << '\n';
  return out.str();
}

std::string csv_without_wall(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    if (f.size() > 9) f.erase(f.begin() + 9);
    for (const auto& x : f) out += x + ',';
    out += '\n';
  }
  return out;
}

void invariants(const BenchResult& res, bool all_valid) {
  PipelineOptions audited;
  audited.local.audit = true;
  long swaps = 0, bad = 0;
  const PipelineId local_ps[] = {PipelineId::L_T, PipelineId::L_P, PipelineId::L_T_G,
                                 PipelineId::L_P_G, PipelineId::G_L_T, PipelineId::G_L_P};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SampleSet s = gen_synthetic(5, 400, 0.05, seed);
    for (const PipelineResult& r : run_pipelines(s, {20, 20}, local_ps, seed, audited)) {
      all_valid = all_valid && validate_layout(r.layout).ok();
      for (const SwapRecord& w : r.swap_log) {
        ++swaps;
        bad += !(w.after > w.before && w.gain > 0.0 && std::abs(w.after - w.before - w.gain) <= 1e-9);
      }
    }
  }
  verdict(swaps > 0 && bad == 0, "invariant: every accepted swap strictly increases the measure",
          fmt("%ld audited swaps, %ld violations", swaps, bad));

  int identity = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GridLayout in = baseline_grid_from_projection(gen_synthetic(5, 400, 0.05, seed), {20, 20});
    const GlobalResult r = global_assignment(in, LambdaSchedule::fixed(1.0));
    identity += r.layout == in;
  }
  verdict(identity == 10, "invariant: fixed lambda 1 global phase is the identity", fmt("%d/10", identity));

  for (const BenchRow& row : res.rows) all_valid = all_valid && row.valid;
  verdict(all_valid, "invariant: every emitted layout validates", fmt("%zu suite rows plus extra runs", res.rows.size()));

  int same = 0, total = 0;
  for (std::uint64_t seed : {3ull, 8ull}) {
    const SampleSet s = gen_synthetic(5, 400, 0.05, seed);
    for (PipelineId p : kAllPipelines) {
      ++total;
      same += fingerprint(run_pipeline(s, {20, 20}, p, seed), s) ==
              fingerprint(run_pipeline(s, {20, 20}, p, seed), s);
    }
  }
  BenchConfig small;
  small.grid_sizes = {12};
  small.seeds = {0, 1};
  const bool csv_same = csv_without_wall(bench_csv(run_matrix(small))) == csv_without_wall(bench_csv(run_matrix(small)));
  verdict(same == total && csv_same, "invariant: repeated seeded runs are byte-identical",
          fmt("%d/%d pipeline outputs, bench csv %s", same, total, csv_same ? "identical" : "differs"));
}

} // namespace

int main() {
  std::printf("gridweave acceptance (worker threads: %d)\n", worker_threads());
  lap_oracle();
  hull_oracle();
  shape_oracles();

  BenchConfig cfg;
  cfg.seeds.clear();
  for (std::uint64_t s = 0; s < 10; ++s) cfg.seeds.push_back(s);
  const auto t0 = std::chrono::steady_clock::now();
  const BenchResult res = run_matrix(cfg);
  const double suite_secs = seconds_since(t0);

  suite_orderings(res, suite_secs);
  size_trends(res);
  bool all_valid = true;
  lambda_schedule(res, all_valid);
  invariants(res, all_valid);

  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
