#include "gridweave/global_assign.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "gridweave/measures.hpp"

namespace gridweave {

GridLayout grid_from_targets(const GridSpec& spec, std::vector<ClusterId> sample_clusters,
                             std::span<const Point> targets) {
  validate_grid(spec);
  const std::size_t n = targets.size();
  const auto cap = static_cast<std::size_t>(spec.capacity());
  if (n > cap)
    throw Error("grid_too_small", std::to_string(n) + " samples do not fit a " +
                                      std::to_string(spec.width) + "x" +
                                      std::to_string(spec.height) + " grid");
  CostMatrix cost(cap, cap);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < cap; ++j)
      cost.at(i, j) = squared_distance(targets[i], spec.center(static_cast<CellIndex>(j)));
  const LapSolution sol = solve_lap(cost);
  std::vector<CellIndex> cell_of(sol.col_of_row.begin(), sol.col_of_row.begin() + n);
  return make_layout(spec, std::move(sample_clusters), std::move(cell_of));
}

GridLayout baseline_grid_from_projection(const SampleSet& samples, const GridSpec& spec) {
  validate_grid(spec);
  const std::size_t n = samples.size();
  if (n > static_cast<std::size_t>(spec.capacity()))
    throw Error("grid_too_small", std::to_string(n) + " samples do not fit a " +
                                      std::to_string(spec.width) + "x" +
                                      std::to_string(spec.height) + " grid");
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : samples.samples) {
    if (!std::isfinite(s.position.x) || !std::isfinite(s.position.y))
      throw Error("invalid_samples", "sample '" + s.id + "' has a non-finite position");
    x0 = std::min(x0, s.position.x);
    x1 = std::max(x1, s.position.x);
    y0 = std::min(y0, s.position.y);
    y1 = std::max(y1, s.position.y);
  }
  auto scale = [](double v, double lo, double hi, int cells) {
    if (!(hi > lo)) return cells / 2.0;
    return 0.5 + (v - lo) / (hi - lo) * (cells - 1);
  };
  std::vector<Point> targets;
  targets.reserve(n);
  for (const auto& s : samples.samples)
    targets.push_back({scale(s.position.x, x0, x1, spec.width),
                       scale(s.position.y, y0, y1, spec.height)});
  return grid_from_targets(spec, samples.clusters(), targets);
}

CostMatrix build_cost_matrix(const GridLayout& input, const std::map<ClusterId, Point>& centers,
                             double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw Error("invalid_argument", "lambda must lie in [0, 1]");
  const auto cap = static_cast<std::size_t>(input.spec.capacity());
  CostMatrix cost(cap, cap);
  for (std::size_t i = 0; i < input.sample_count(); ++i) {
    const auto it = centers.find(input.sample_clusters[i]);
    if (it == centers.end())
      throw Error("missing_center",
                  "no center for cluster " + std::to_string(input.sample_clusters[i]));
    const Point vi = input.position_of(static_cast<SampleIndex>(i));
    const Point mu = it->second;
    for (std::size_t j = 0; j < cap; ++j) {
      const Point vj = input.spec.center(static_cast<CellIndex>(j));
      cost.at(i, j) = lambda * squared_distance(vj, vi) + (1.0 - lambda) * squared_distance(vj, mu);
    }
  }
  return cost;
}

std::optional<double> compute_lambda(const AnchoredValue& prox, const AnchoredValue& comp) {
  const double prox_span = prox.at_comp_anchor - prox.at_prox_anchor;
  const double comp_span = comp.at_prox_anchor - comp.at_comp_anchor;
  if (!(prox_span > 0.0) || !(comp_span > 0.0)) return std::nullopt;
  const double dprox = std::max(0.0, (prox.current - prox.at_prox_anchor) / prox_span);
  const double dcomp = std::max(0.0, (comp.current - comp.at_comp_anchor) / comp_span);
  if (dprox + dcomp <= 0.0) return 0.5;
  return std::clamp(dprox / (dprox + dcomp), 0.0, 1.0);
}

namespace {

GridLayout solve_step(const GridLayout& input, const std::map<ClusterId, Point>& centers,
                      double lambda) {
  const LapSolution sol = solve_lap(build_cost_matrix(input, centers, lambda));
  std::vector<CellIndex> cell_of(sol.col_of_row.begin(),
                                 sol.col_of_row.begin() + input.sample_count());
  return make_layout(input.spec, input.sample_clusters, std::move(cell_of));
}

} // namespace

GlobalResult fixed_lambda_loop(const GridLayout& input, double lambda, int rounds) {
  require_valid(input);
  GlobalResult out;
  out.layout = input;
  auto centers = cluster_centers(input);
  for (int round = 0; round < rounds; ++round) {
    GridLayout next = solve_step(input, centers, lambda);
    ++out.lap_solves;
    out.history.push_back({lambda, proximity_raw(next, input), compactness_raw(next)});
    const bool unchanged = next.assignment == out.layout.assignment;
    out.layout = std::move(next);
    if (unchanged) {
      out.converged = true;
      break;
    }
    centers = cluster_centers(out.layout);
  }
  return out;
}

GlobalResult global_assignment(const GridLayout& input, const LambdaSchedule& schedule) {
  if (schedule.mode == LambdaSchedule::Mode::Fixed)
    return fixed_lambda_loop(input, schedule.lambda, schedule.fixed_rounds);

  require_valid(input);
  GlobalResult anchor = fixed_lambda_loop(input, 0.0, schedule.fixed_rounds);
  GlobalResult out;
  out.anchor_solves = anchor.lap_solves;
  out.lap_solves = anchor.lap_solves;

  const double prox_c = proximity_raw(anchor.layout, input);
  const double comp_p = compactness_raw(input);
  const double comp_c = compactness_raw(anchor.layout);

  GridLayout current = input;
  std::deque<Assignment> recent{input.assignment};
  const auto centers = cluster_centers(input);
  double lambda = schedule.lambda;
  for (int it = 0; it < schedule.max_iters; ++it) {
    GridLayout next = solve_step(input, centers, lambda);
    ++out.adaptive_solves;
    ++out.lap_solves;
    const double prox = proximity_raw(next, input);
    const double comp = compactness_raw(next);
    out.history.push_back({lambda, prox, comp});
    const bool repeated =
        std::find(recent.begin(), recent.end(), next.assignment) != recent.end();
    current = std::move(next);
    if (repeated) {
      out.converged = true;
      break;
    }
    recent.push_back(current.assignment);
    if (recent.size() > 3) recent.pop_front();
    lambda = compute_lambda({prox, 0.0, prox_c}, {comp, comp_p, comp_c}).value_or(0.5);
  }
  out.layout = std::move(current);
  return out;
}

} // namespace gridweave
