#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gridweave/lap.hpp"
#include "gridweave/model.hpp"

namespace gridweave {

/// Places samples by min-max scaling their projections into the grid extent
/// (cell centers span [0.5, W - 0.5] x [0.5, H - 0.5]) and solving a LAP on
/// squared displacement. Throws Error("grid_too_small") when there are more
/// samples than cells.
GridLayout baseline_grid_from_projection(const SampleSet& samples, const GridSpec& spec);

/// Same LAP as the baseline, but `targets` are already in cell units.
GridLayout grid_from_targets(const GridSpec& spec, std::vector<ClusterId> sample_clusters,
                             std::span<const Point> targets);

/// capacity x capacity matrix; row i < n holds
/// lambda |v_j - v_i|^2 + (1 - lambda) |v_j - mu_cluster(i)|^2 where v_i is the
/// sample's cell in `input`. Padding rows (unassigned cells) are zero.
/// Throws Error("missing_center") if a sample's cluster has no center.
CostMatrix build_cost_matrix(const GridLayout& input, const std::map<ClusterId, Point>& centers,
                             double lambda);

/// Objective values at the current layout and at the two anchor layouts
/// (proximity-optimal input and compactness-optimal layout).
struct AnchoredValue {
  double current = 0.0;
  double at_prox_anchor = 0.0;
  double at_comp_anchor = 0.0;
};

/// Weight that favors whichever objective lags further behind its anchor:
/// dProx = (P - P_p) / (P_c - P_p), dComp = (C - C_c) / (C_p - C_c),
/// lambda = dProx / (dProx + dComp), each progress term floored at 0 and the
/// result clamped to [0, 1]. Returns nullopt when the anchors coincide.
std::optional<double> compute_lambda(const AnchoredValue& prox, const AnchoredValue& comp);

struct LambdaSchedule {
  enum class Mode { Adaptive, Fixed };
  Mode mode = Mode::Adaptive;
  double lambda = 0.5; // fixed weight, or the starting weight when adaptive
  int max_iters = 20;
  int fixed_rounds = 10;

  static LambdaSchedule adaptive() { return {}; }
  static LambdaSchedule fixed(double lambda) { return {Mode::Fixed, lambda, 20, 10}; }
};

struct LambdaStep {
  double lambda = 0.0;
  double prox2 = 0.0;
  double comp = 0.0;
};

struct GlobalResult {
  GridLayout layout;
  std::vector<LambdaStep> history;
  int lap_solves = 0;      // every LAP solved by the phase
  int anchor_solves = 0;   // solves spent on the compactness anchor
  int adaptive_solves = 0; // solves of the adaptive-lambda loop
  bool converged = false;
};

/// Alternates cluster centers and LAP solves at a fixed weight until the
/// assignment stops changing (at most `rounds` solves).
GlobalResult fixed_lambda_loop(const GridLayout& input, double lambda, int rounds);

/// Global phase. Fixed mode runs fixed_lambda_loop. Adaptive mode first finds
/// the compactness anchor with a lambda = 0 loop, then iterates {solve at
/// lambda, recompute lambda} with cluster centers held at their input values,
/// until an assignment repeats one of the last three, or `max_iters` solves.
GlobalResult global_assignment(const GridLayout& input, const LambdaSchedule& schedule);

} // namespace gridweave
