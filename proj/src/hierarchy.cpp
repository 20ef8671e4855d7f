#include "gridweave/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gridweave/global_assign.hpp"

namespace gridweave {

namespace {

// Splits `total` units among groups in proportion to `weights` (largest
// remainder, ties to the lower index). Quotas never exceed `caps`; with
// `at_least_one` every group with a positive cap gets one unit first.
std::vector<std::size_t> apportion(const std::vector<std::size_t>& weights,
                                   const std::vector<std::size_t>& caps, std::size_t total,
                                   bool at_least_one) {
  const std::size_t groups = weights.size();
  std::vector<std::size_t> quota(groups, 0);
  const double sum = static_cast<double>(std::accumulate(weights.begin(), weights.end(),
                                                         std::size_t{0}));
  if (sum <= 0.0 || total == 0) return quota;
  std::vector<double> exact(groups);
  std::size_t given = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    exact[g] = static_cast<double>(total) * static_cast<double>(weights[g]) / sum;
    quota[g] = std::min(caps[g], static_cast<std::size_t>(std::floor(exact[g])));
    if (at_least_one && caps[g] > 0) quota[g] = std::max<std::size_t>(quota[g], 1);
    given += quota[g];
  }
  while (given > total) {
    std::size_t pick = groups;
    for (std::size_t g = 0; g < groups; ++g)
      if (quota[g] > 1 && (pick == groups || quota[g] > quota[pick])) pick = g;
    if (pick == groups) break;
    --quota[pick];
    --given;
  }
  while (given < total) {
    std::size_t pick = groups;
    double best = -1.0;
    for (std::size_t g = 0; g < groups; ++g) {
      if (quota[g] >= caps[g]) continue;
      const double rest = exact[g] - static_cast<double>(quota[g]);
      if (rest > best) {
        best = rest;
        pick = g;
      }
    }
    if (pick == groups) break;
    ++quota[pick];
    ++given;
  }
  return quota;
}

// First `count` entries of a seeded shuffle of `group`.
std::vector<SampleIndex> draw(std::vector<SampleIndex> group, std::size_t count,
                              std::mt19937_64& rng) {
  for (std::size_t i = group.size(); i > 1; --i) std::swap(group[i - 1], group[rng() % i]);
  group.resize(std::min(count, group.size()));
  return group;
}

// Every pool sample that is not a representative goes to its nearest
// representative in the projection (ties to the earlier representative).
std::map<SampleIndex, std::vector<SampleIndex>> assign_to_nearest(
    const SampleSet& universe, const std::vector<SampleIndex>& pool,
    const std::vector<SampleIndex>& reps) {
  std::map<SampleIndex, std::vector<SampleIndex>> out;
  for (SampleIndex r : reps) out[r];
  std::vector<bool> is_rep(universe.size(), false);
  for (SampleIndex r : reps) is_rep[r] = true;
  for (SampleIndex s : pool) {
    if (is_rep[s]) continue;
    const Point p = universe.samples[s].position;
    SampleIndex best = reps.front();
    double best_d = squared_distance(p, universe.samples[best].position);
    for (SampleIndex r : reps) {
      const double d = squared_distance(p, universe.samples[r].position);
      if (d < best_d) {
        best_d = d;
        best = r;
      }
    }
    out[best].push_back(s);
  }
  return out;
}

std::vector<ClusterId> clusters_of(const SampleSet& universe, const std::vector<SampleIndex>& ids) {
  std::vector<ClusterId> out;
  out.reserve(ids.size());
  for (SampleIndex s : ids) out.push_back(universe.samples[s].cluster);
  return out;
}

// Per-axis map from projection to child-grid units: least squares against the
// anchors when they spread along the axis, else the pool's min-max scale
// centered on the anchors.
struct AxisMap {
  double slope = 0.0, offset = 0.0;
  double operator()(double v) const { return slope * v + offset; }
};

AxisMap fit_axis(const std::vector<double>& proj, const std::vector<double>& anchor,
                 double pool_min, double pool_max, int cells) {
  const double n = static_cast<double>(proj.size());
  const double mp = std::accumulate(proj.begin(), proj.end(), 0.0) / n;
  const double ma = std::accumulate(anchor.begin(), anchor.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < proj.size(); ++i) {
    sxy += (proj[i] - mp) * (anchor[i] - ma);
    sxx += (proj[i] - mp) * (proj[i] - mp);
  }
  AxisMap map;
  if (proj.size() >= 2 && sxx > 0.0 && sxy > 0.0) {
    map.slope = sxy / sxx;
  } else if (pool_max > pool_min) {
    map.slope = (cells - 1) / (pool_max - pool_min);
  }
  map.offset = ma - map.slope * mp;
  return map;
}

} // namespace

std::size_t HierarchyNode::pool_size() const {
  std::size_t n = representatives.size();
  for (const auto& [rep, hidden] : assigned) n += hidden.size();
  return n;
}

std::optional<SampleIndex> HierarchyNode::sample_at(CellIndex cell) const {
  if (cell < 0 || cell >= layout.spec.capacity()) return std::nullopt;
  const SampleIndex s = layout.assignment.sample_of[cell];
  if (s == kNoSample) return std::nullopt;
  return representatives[s];
}

HierarchyNode build_root(std::shared_ptr<const SampleSet> samples, const GridSpec& spec,
                         std::uint64_t seed, const HierarchyOptions& options, std::string id) {
  if (!samples || samples->samples.empty())
    throw Error("invalid_samples", "cannot build a hierarchy over an empty sample set");
  validate_grid(spec);
  validate_samples(*samples);
  const SampleSet& all = *samples;
  const std::size_t capacity = static_cast<std::size_t>(spec.capacity());

  std::vector<SampleIndex> everyone(all.size());
  std::iota(everyone.begin(), everyone.end(), 0);
  std::vector<SampleIndex> reps;
  if (all.size() <= capacity) {
    reps = everyone;
  } else {
    const std::size_t clusters = all.cluster_names.size();
    std::vector<std::vector<SampleIndex>> groups(clusters);
    for (SampleIndex s : everyone) groups[all.samples[s].cluster].push_back(s);
    std::vector<std::size_t> sizes;
    for (const auto& g : groups) sizes.push_back(g.size());
    const auto quota = apportion(sizes, sizes, capacity, true);
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < clusters; ++k) {
      auto chosen = draw(groups[k], quota[k], rng);
      reps.insert(reps.end(), chosen.begin(), chosen.end());
    }
    std::sort(reps.begin(), reps.end());
  }

  HierarchyNode node;
  node.id = std::move(id);
  node.breadcrumb = {node.id};
  node.universe = samples;
  node.representatives = reps;
  node.assigned = assign_to_nearest(all, everyone, reps);

  const PipelineResult run =
      run_pipeline(subset(all, reps), spec, options.pipeline, seed, options.phases);
  node.input = run.input;
  node.layout = run.layout;
  node.report = run.report;
  return node;
}

HierarchyNode zoom(const HierarchyNode& node, const std::vector<Cell>& selected,
                   const GridSpec& spec, std::uint64_t seed, std::string child_id,
                   const HierarchyOptions& options) {
  validate_grid(spec);
  if (selected.empty()) throw Error("invalid_selection", "selection is empty");
  std::vector<Cell> cells = selected;
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  const std::size_t capacity = static_cast<std::size_t>(spec.capacity());
  if (cells.size() > capacity)
    throw Error("invalid_selection", "selection has more cells than the child grid");

  const SampleSet& all = *node.universe;
  std::vector<SampleIndex> carried;
  int c0 = cells.front().col, c1 = c0, r0 = cells.front().row, r1 = r0;
  for (const Cell& c : cells) {
    if (!node.layout.spec.contains(c))
      throw Error("invalid_selection", "cell (" + std::to_string(c.col) + "," +
                                           std::to_string(c.row) + ") is outside the grid");
    const auto s = node.sample_at(node.layout.spec.index(c));
    if (!s)
      throw Error("invalid_selection", "cell (" + std::to_string(c.col) + "," +
                                           std::to_string(c.row) + ") is empty");
    carried.push_back(*s);
    c0 = std::min(c0, c.col);
    c1 = std::max(c1, c.col);
    r0 = std::min(r0, c.row);
    r1 = std::max(r1, c.row);
  }
  std::sort(carried.begin(), carried.end());

  std::vector<SampleIndex> pool = carried;
  std::vector<std::vector<SampleIndex>> hidden;
  for (SampleIndex rep : carried) {
    const auto it = node.assigned.find(rep);
    hidden.push_back(it == node.assigned.end() ? std::vector<SampleIndex>{} : it->second);
    pool.insert(pool.end(), hidden.back().begin(), hidden.back().end());
  }

  std::vector<SampleIndex> reps;
  if (pool.size() <= capacity) {
    reps = pool;
  } else {
    reps = carried;
    std::vector<std::size_t> sizes;
    for (const auto& h : hidden) sizes.push_back(h.size());
    const auto quota = apportion(sizes, sizes, capacity - carried.size(), false);
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < hidden.size(); ++k) {
      auto chosen = draw(hidden[k], quota[k], rng);
      reps.insert(reps.end(), chosen.begin(), chosen.end());
    }
  }
  std::sort(reps.begin(), reps.end());

  HierarchyNode child;
  child.id = std::move(child_id);
  child.parent = node.id;
  child.breadcrumb = node.breadcrumb;
  child.breadcrumb.push_back(child.id);
  child.universe = node.universe;
  child.representatives = reps;
  child.assigned = assign_to_nearest(all, pool, reps);

  // Parent cells rescaled from the selection's bounding box.
  const double span_x = c1 + 1 - c0, span_y = r1 + 1 - r0;
  std::vector<double> proj_x, proj_y, anchor_x, anchor_y;
  for (const Cell& c : cells) {
    const SampleIndex s = *node.sample_at(node.layout.spec.index(c));
    const Point a{(c.col + 0.5 - c0) / span_x * spec.width, (c.row + 0.5 - r0) / span_y * spec.height};
    child.anchor_positions[s] = a;
    proj_x.push_back(all.samples[s].position.x);
    proj_y.push_back(all.samples[s].position.y);
    anchor_x.push_back(a.x);
    anchor_y.push_back(a.y);
  }
  double min_x = all.samples[pool.front()].position.x, max_x = min_x;
  double min_y = all.samples[pool.front()].position.y, max_y = min_y;
  for (SampleIndex s : pool) {
    min_x = std::min(min_x, all.samples[s].position.x);
    max_x = std::max(max_x, all.samples[s].position.x);
    min_y = std::min(min_y, all.samples[s].position.y);
    max_y = std::max(max_y, all.samples[s].position.y);
  }
  const AxisMap fx = fit_axis(proj_x, anchor_x, min_x, max_x, spec.width);
  const AxisMap fy = fit_axis(proj_y, anchor_y, min_y, max_y, spec.height);

  std::vector<Point> targets;
  for (SampleIndex s : reps) {
    const auto it = child.anchor_positions.find(s);
    if (it != child.anchor_positions.end()) {
      targets.push_back(it->second);
    } else {
      const Point p = all.samples[s].position;
      targets.push_back({std::clamp(fx(p.x), 0.5, spec.width - 0.5),
                         std::clamp(fy(p.y), 0.5, spec.height - 0.5)});
    }
  }
  child.input = grid_from_targets(spec, clusters_of(all, reps), targets);
  const PipelineResult run = run_phases(child.input, options.pipeline, seed, options.phases);
  child.layout = run.layout;
  child.report = run.report;
  return child;
}

double ordering_agreement(const HierarchyNode& parent, const HierarchyNode& child) {
  auto slot = [](const HierarchyNode& n, SampleIndex s) {
    const auto it = std::lower_bound(n.representatives.begin(), n.representatives.end(), s);
    if (it == n.representatives.end() || *it != s)
      throw Error("invalid_argument", "sample is not a representative of node " + n.id);
    return static_cast<SampleIndex>(it - n.representatives.begin());
  };
  std::vector<Point> before, after;
  for (const auto& [s, anchor] : child.anchor_positions) {
    before.push_back(parent.layout.position_of(slot(parent, s)));
    after.push_back(child.layout.position_of(slot(child, s)));
  }
  std::size_t compared = 0, kept = 0;
  auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
  for (std::size_t i = 0; i < before.size(); ++i) {
    for (std::size_t j = i + 1; j < before.size(); ++j) {
      const double dx[2] = {before[j].x - before[i].x, after[j].x - after[i].x};
      const double dy[2] = {before[j].y - before[i].y, after[j].y - after[i].y};
      for (const double* d : {dx, dy}) {
        if (d[0] == 0.0) continue;
        ++compared;
        if (sign(d[0]) == sign(d[1])) ++kept;
      }
    }
  }
  return compared == 0 ? 1.0 : static_cast<double>(kept) / static_cast<double>(compared);
}

std::uint64_t child_seed(std::uint64_t session_seed, const std::string& node_id,
                         std::vector<Cell> selected) {
  std::sort(selected.begin(), selected.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t value, int bytes) {
    for (int b = 0; b < bytes; ++b) {
      h ^= (value >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(session_seed, 8);
  for (unsigned char ch : node_id) mix(ch, 1);
  for (const Cell& c : selected) {
    mix(static_cast<std::uint32_t>(c.col), 4);
    mix(static_cast<std::uint32_t>(c.row), 4);
  }
  return h;
}

} // namespace gridweave
