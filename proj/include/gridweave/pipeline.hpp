#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gridweave/global_assign.hpp"
#include "gridweave/local_adjust.hpp"
#include "gridweave/measures.hpp"
#include "gridweave/model.hpp"

namespace gridweave {

/// Phase combinations: G = global assignment, L_T / L_P = local adjustment on
/// the triple / perimeter ratio. Order in the name is execution order.
enum class PipelineId { Baseline, G, L_T, L_P, L_T_G, L_P_G, G_L_T, G_L_P };

inline constexpr PipelineId kAllPipelines[] = {
    PipelineId::Baseline, PipelineId::G,     PipelineId::L_T,   PipelineId::L_P,
    PipelineId::L_T_G,    PipelineId::L_P_G, PipelineId::G_L_T, PipelineId::G_L_P};

/// CLI spelling: baseline, g, l-t, l-p, l-t-g, l-p-g, g-l-t, g-l-p.
std::string_view to_string(PipelineId p);
PipelineId parse_pipeline(std::string_view name);

struct PipelineOptions {
  LambdaSchedule schedule = LambdaSchedule::adaptive();
  LocalOptions local;
};

struct PipelineStats {
  double wall_ms = 0.0;
  double baseline_ms = 0.0;
  double global_ms = 0.0;
  double local_ms = 0.0;
  int lap_solves = 0;      // global-phase LAP solves (baseline solve excluded)
  int adaptive_solves = 0; // of which in the adaptive-lambda loop
  int swap_passes = 0;
  int swaps = 0;
};

struct PipelineResult {
  GridLayout input; // the layout every score is measured against
  GridLayout layout;
  MeasureReport report;
  PipelineStats stats;
  std::vector<SwapRecord> swap_log;
};

/// Runs the phases of `p` starting from `input` (already a valid layout).
/// wall_ms covers the phases only.
PipelineResult run_phases(const GridLayout& input, PipelineId p, std::uint64_t seed,
                          const PipelineOptions& options = {});

/// Same as calling run_phases for each pipeline, but phase prefixes shared by
/// several pipelines (such as the global phase of g, g-l-t and g-l-p) run
/// once. Every result still reports the summed time of all its phases.
std::vector<PipelineResult> run_phases(const GridLayout& input, std::span<const PipelineId> ps,
                                       std::uint64_t seed, const PipelineOptions& options = {});

/// Baseline projection layout followed by the phases of `p`; the report is
/// computed against the baseline layout.
PipelineResult run_pipeline(const SampleSet& samples, const GridSpec& spec, PipelineId p,
                            std::uint64_t seed, const PipelineOptions& options = {});

/// Several pipelines over one baseline, sharing phase prefixes.
std::vector<PipelineResult> run_pipelines(const SampleSet& samples, const GridSpec& spec,
                                          std::span<const PipelineId> ps, std::uint64_t seed,
                                          const PipelineOptions& options = {});

} // namespace gridweave
