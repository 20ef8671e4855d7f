#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gridweave/model.hpp"
#include "gridweave/pipeline.hpp"

namespace gridweave {

/// Isotropic Gaussian mixture in the unit square. Cluster means follow a
/// seed-rotated Halton (2, 3) pattern inside [0.2, 0.8]^2; cluster k receives
/// a contiguous block of about n / clusters samples. Positions are clamped to
/// [0, 1]. Uses only fully specified generators, so output is reproducible.
SampleSet gen_synthetic(int clusters, int n, double spread, std::uint64_t seed);

struct BenchConfig {
  std::vector<int> grid_sizes{20, 30, 40};
  std::vector<int> cluster_counts{5};
  int samples = 0; // 0 fills the grid
  double spread = 0.05;
  int repeats = 1;
  std::vector<std::uint64_t> seeds{0};
  LambdaSchedule schedule = LambdaSchedule::adaptive();
  std::vector<PipelineId> pipelines{std::begin(kAllPipelines), std::end(kAllPipelines)};
  int threads = 0; // 0 = GRIDWEAVE_THREADS or hardware concurrency
};

/// Throws Error("invalid_config") on non-positive counts, empty lists or
/// repeated pipelines.
void validate_config(const BenchConfig& cfg);

struct BenchRow {
  PipelineId pipeline = PipelineId::Baseline;
  int grid = 0;
  int clusters = 0;
  std::uint64_t seed = 0;
  int repeat = 0;
  MeasureReport report;
  PipelineStats stats;
  bool valid = false; // validate_layout on the emitted layout
};

struct BenchCell {
  PipelineId pipeline = PipelineId::Baseline;
  int grid = 0;
  int clusters = 0;
  int runs = 0;
  MeasureReport mean;
  double wall_ms = 0.0;
  double lap_solves = 0.0;
  double swap_passes = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;   // ordered by (clusters, grid, pipeline, seed, repeat)
  std::vector<BenchCell> cells; // per (clusters, grid, pipeline) means
};

/// Executes the full cross product, in parallel when several worker threads
/// are available. Row order does not depend on scheduling. Pipelines run on
/// the same generated input share common phase prefixes; wall_ms still
/// counts every phase of a pipeline.
BenchResult run_matrix(const BenchConfig& cfg);

/// Worker count: GRIDWEAVE_THREADS when set and positive, else hardware
/// concurrency (at least 1).
int worker_threads();

inline constexpr const char* kBenchCsvHeader =
    "pipeline,grid,seed,proximity,compactness,area_ratio,triple_ratio,perimeter_ratio,"
    "cut_ratio,wall_ms,lap_solves,swap_passes";

std::string bench_csv(const BenchResult& result);

} // namespace gridweave
