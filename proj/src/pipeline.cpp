#include "gridweave/pipeline.hpp"

#include <chrono>
#include <map>

namespace gridweave {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

enum class Phase { Global, LocalTriple, LocalPerimeter };

std::vector<Phase> phases_of(PipelineId p) {
  switch (p) {
  case PipelineId::Baseline: return {};
  case PipelineId::G: return {Phase::Global};
  case PipelineId::L_T: return {Phase::LocalTriple};
  case PipelineId::L_P: return {Phase::LocalPerimeter};
  case PipelineId::L_T_G: return {Phase::LocalTriple, Phase::Global};
  case PipelineId::L_P_G: return {Phase::LocalPerimeter, Phase::Global};
  case PipelineId::G_L_T: return {Phase::Global, Phase::LocalTriple};
  case PipelineId::G_L_P: return {Phase::Global, Phase::LocalPerimeter};
  }
  return {};
}

} // namespace

std::string_view to_string(PipelineId p) {
  switch (p) {
  case PipelineId::Baseline: return "baseline";
  case PipelineId::G: return "g";
  case PipelineId::L_T: return "l-t";
  case PipelineId::L_P: return "l-p";
  case PipelineId::L_T_G: return "l-t-g";
  case PipelineId::L_P_G: return "l-p-g";
  case PipelineId::G_L_T: return "g-l-t";
  case PipelineId::G_L_P: return "g-l-p";
  }
  return "?";
}

PipelineId parse_pipeline(std::string_view name) {
  for (PipelineId p : kAllPipelines)
    if (to_string(p) == name) return p;
  throw Error("invalid_argument", "unknown pipeline '" + std::string(name) + "'");
}

namespace {

struct Stage {
  GridLayout layout;
  PipelineStats stats;
  std::vector<SwapRecord> swap_log;
};

Stage run_phase(const Stage& from, Phase phase, const GridLayout& input, std::uint64_t seed,
                const PipelineOptions& options) {
  Stage out = from;
  const auto t0 = Clock::now();
  if (phase == Phase::Global) {
    // The global phase anchors proximity on the layout it receives.
    GlobalResult g = global_assignment(from.layout, options.schedule);
    out.stats.lap_solves += g.lap_solves;
    out.stats.adaptive_solves += g.adaptive_solves;
    out.layout = std::move(g.layout);
    const double ms = ms_since(t0);
    out.stats.global_ms += ms;
    out.stats.wall_ms += ms;
  } else {
    const ConvexityMeasure m =
        phase == Phase::LocalTriple ? ConvexityMeasure::Triple : ConvexityMeasure::Perimeter;
    LocalResult l = local_adjust(from.layout, m, seed, input, options.local);
    out.stats.swap_passes += l.passes;
    out.stats.swaps += l.swaps;
    out.swap_log.insert(out.swap_log.end(), l.log.begin(), l.log.end());
    out.layout = std::move(l.layout);
    const double ms = ms_since(t0);
    out.stats.local_ms += ms;
    out.stats.wall_ms += ms;
  }
  return out;
}

PipelineResult finish(const GridLayout& input, Stage stage) {
  PipelineResult out;
  out.input = input;
  out.layout = std::move(stage.layout);
  out.stats = stage.stats;
  out.swap_log = std::move(stage.swap_log);
  out.report = report(out.layout, input);
  return out;
}

} // namespace

PipelineResult run_phases(const GridLayout& input, PipelineId p, std::uint64_t seed,
                          const PipelineOptions& options) {
  require_valid(input);
  Stage stage{input, {}, {}};
  for (Phase phase : phases_of(p)) stage = run_phase(stage, phase, input, seed, options);
  return finish(input, std::move(stage));
}

std::vector<PipelineResult> run_phases(const GridLayout& input, std::span<const PipelineId> ps,
                                       std::uint64_t seed, const PipelineOptions& options) {
  require_valid(input);
  std::map<std::vector<Phase>, Stage> done;
  done[{}] = Stage{input, {}, {}};
  std::vector<PipelineResult> out;
  for (PipelineId p : ps) {
    std::vector<Phase> prefix;
    const Stage* stage = &done.at(prefix);
    for (Phase phase : phases_of(p)) {
      prefix.push_back(phase);
      auto it = done.find(prefix);
      if (it == done.end())
        it = done.emplace(prefix, run_phase(*stage, phase, input, seed, options)).first;
      stage = &it->second;
    }
    out.push_back(finish(input, *stage));
  }
  return out;
}

PipelineResult run_pipeline(const SampleSet& samples, const GridSpec& spec, PipelineId p,
                            std::uint64_t seed, const PipelineOptions& options) {
  return std::move(run_pipelines(samples, spec, std::span<const PipelineId>(&p, 1), seed,
                                 options)
                       .front());
}

std::vector<PipelineResult> run_pipelines(const SampleSet& samples, const GridSpec& spec,
                                          std::span<const PipelineId> ps, std::uint64_t seed,
                                          const PipelineOptions& options) {
  const auto t0 = Clock::now();
  GridLayout baseline = baseline_grid_from_projection(samples, spec);
  const double baseline_ms = ms_since(t0);
  std::vector<PipelineResult> out = run_phases(baseline, ps, seed, options);
  for (auto& r : out) {
    r.stats.baseline_ms = baseline_ms;
    r.stats.wall_ms += baseline_ms;
  }
  return out;
}

} // namespace gridweave
