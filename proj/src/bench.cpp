#include "gridweave/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

namespace gridweave {

namespace {

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double normal(std::mt19937_64& rng) {
  // Box-Muller; 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - unit(rng);
  const double u2 = unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::string padded(char prefix, int value, int count) {
  const int width = static_cast<int>(std::to_string(std::max(count - 1, 0)).size());
  std::string digits = std::to_string(value);
  return prefix + std::string(width - digits.size(), '0') + digits;
}

} // namespace

SampleSet gen_synthetic(int clusters, int n, double spread, std::uint64_t seed) {
  if (clusters < 1 || n < clusters)
    throw Error("invalid_argument", "need clusters >= 1 and n >= clusters");
  if (!(spread >= 0.0)) throw Error("invalid_argument", "spread must be non-negative");
  std::mt19937_64 rng(seed);
  const double shift_x = unit(rng), shift_y = unit(rng);

  SampleSet set;
  std::vector<Point> means;
  for (int k = 0; k < clusters; ++k) {
    set.cluster_names.push_back(padded('c', k, clusters));
    const double hx = std::fmod(radical_inverse(k + 1, 2) + shift_x, 1.0);
    const double hy = std::fmod(radical_inverse(k + 1, 3) + shift_y, 1.0);
    means.push_back({0.2 + 0.6 * hx, 0.2 + 0.6 * hy});
  }
  set.samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int k = static_cast<int>(static_cast<std::int64_t>(i) * clusters / n);
    Sample s;
    s.id = padded('s', i, n);
    s.cluster = k;
    const double dx = normal(rng), dy = normal(rng);
    s.position = {std::clamp(means[k].x + spread * dx, 0.0, 1.0),
                  std::clamp(means[k].y + spread * dy, 0.0, 1.0)};
    set.samples.push_back(std::move(s));
  }
  return set;
}

void validate_config(const BenchConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error("invalid_config", what); };
  if (cfg.grid_sizes.empty() || cfg.cluster_counts.empty() || cfg.seeds.empty() ||
      cfg.pipelines.empty())
    fail("grid_sizes, cluster_counts, seeds and pipelines must be non-empty");
  for (int g : cfg.grid_sizes)
    if (g < 1) fail("grid sizes must be positive");
  for (int c : cfg.cluster_counts)
    if (c < 1) fail("cluster counts must be positive");
  for (std::size_t i = 0; i < cfg.pipelines.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (cfg.pipelines[i] == cfg.pipelines[j]) fail("pipelines must be distinct");
  if (cfg.samples < 0) fail("samples must be non-negative");
  if (cfg.repeats < 1) fail("repeats must be at least 1");
  if (!(cfg.spread >= 0.0)) fail("spread must be non-negative");
}

int worker_threads() {
  if (const char* env = std::getenv("GRIDWEAVE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

BenchResult run_matrix(const BenchConfig& cfg) {
  validate_config(cfg);
  // One job per generated input; it runs every pipeline on that input.
  struct Job {
    int clusters, grid;
    std::uint64_t seed;
    int repeat;
  };
  std::vector<Job> jobs;
  for (int clusters : cfg.cluster_counts)
    for (int grid : cfg.grid_sizes)
      for (std::uint64_t seed : cfg.seeds)
        for (int r = 0; r < cfg.repeats; ++r) jobs.push_back({clusters, grid, seed, r});

  const std::size_t per_job = cfg.pipelines.size();
  const std::size_t runs_per_cell = cfg.seeds.size() * cfg.repeats;
  // Row of pipeline p for job j: rows are grouped by (clusters, grid), then
  // pipeline, then (seed, repeat).
  auto row_index = [&](std::size_t j, std::size_t p) {
    const std::size_t cell_block = j / runs_per_cell, within = j % runs_per_cell;
    return (cell_block * per_job + p) * runs_per_cell + within;
  };

  PipelineOptions options;
  options.schedule = cfg.schedule;
  BenchResult result;
  result.rows.resize(jobs.size() * per_job);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      const GridSpec spec{job.grid, job.grid};
      const int n = cfg.samples > 0 ? cfg.samples : spec.capacity();
      const SampleSet samples = gen_synthetic(job.clusters, n, cfg.spread, job.seed);
      const auto runs = run_pipelines(samples, spec, cfg.pipelines, job.seed, options);
      for (std::size_t p = 0; p < per_job; ++p) {
        BenchRow& row = result.rows[row_index(j, p)];
        row.pipeline = cfg.pipelines[p];
        row.grid = job.grid;
        row.clusters = job.clusters;
        row.seed = job.seed;
        row.repeat = job.repeat;
        row.report = runs[p].report;
        row.stats = runs[p].stats;
        row.valid = validate_layout(runs[p].layout).ok();
      }
    }
  };
  const int threads = std::min<int>(cfg.threads > 0 ? cfg.threads : worker_threads(),
                                    static_cast<int>(jobs.size()));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (std::size_t start = 0; start < result.rows.size();) {
    std::size_t end = start;
    const BenchRow& first = result.rows[start];
    while (end < result.rows.size() && result.rows[end].pipeline == first.pipeline &&
           result.rows[end].grid == first.grid && result.rows[end].clusters == first.clusters)
      ++end;
    BenchCell cell;
    cell.pipeline = first.pipeline;
    cell.grid = first.grid;
    cell.clusters = first.clusters;
    cell.runs = static_cast<int>(end - start);
    MeasureReport sum{0, 0, 0, 0, 0, 0, 0, 0};
    for (std::size_t i = start; i < end; ++i) {
      const auto& r = result.rows[i].report;
      sum.proximity += r.proximity;
      sum.compactness += r.compactness;
      sum.area_ratio += r.area_ratio;
      sum.triple_ratio += r.triple_ratio;
      sum.perimeter_ratio += r.perimeter_ratio;
      sum.cut_ratio += r.cut_ratio;
      sum.prox2 += r.prox2;
      sum.comp += r.comp;
      cell.wall_ms += result.rows[i].stats.wall_ms;
      cell.lap_solves += result.rows[i].stats.lap_solves;
      cell.swap_passes += result.rows[i].stats.swap_passes;
    }
    const double k = cell.runs;
    cell.mean = {sum.proximity / k,    sum.compactness / k,     sum.area_ratio / k,
                 sum.triple_ratio / k, sum.perimeter_ratio / k, sum.cut_ratio / k,
                 sum.prox2 / k,        sum.comp / k};
    cell.wall_ms /= k;
    cell.lap_solves /= k;
    cell.swap_passes /= k;
    result.cells.push_back(cell);
    start = end;
  }
  return result;
}

std::string bench_csv(const BenchResult& result) {
  std::ostringstream out;
  out << kBenchCsvHeader << '\n';
  char buf[512];
  for (const auto& row : result.rows) {
    const auto& r = row.report;
    std::snprintf(buf, sizeof buf, "%s,%dx%d,%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.3f,%d,%d\n",
                  std::string(to_string(row.pipeline)).c_str(), row.grid, row.grid,
                  static_cast<unsigned long long>(row.seed), r.proximity, r.compactness,
                  r.area_ratio, r.triple_ratio, r.perimeter_ratio, r.cut_ratio, row.stats.wall_ms,
                  row.stats.lap_solves, row.stats.swap_passes);
    out << buf;
  }
  return out.str();
}

} // namespace gridweave
