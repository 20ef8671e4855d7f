#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gridweave/measures.hpp"
#include "gridweave/model.hpp"
#include "gridweave/pipeline.hpp"

namespace gridweave {

/// One level of the zoomable hierarchy. Sample indices refer to `universe`,
/// the full data set shared by every node of a hierarchy. Nodes are immutable
/// once built.
struct HierarchyNode {
  std::string id;
  std::optional<std::string> parent;
  std::vector<std::string> breadcrumb; // ancestor ids from the root, then this node
  std::shared_ptr<const SampleSet> universe;

  /// Representatives in layout sample order.
  std::vector<SampleIndex> representatives;
  /// Representative -> hidden samples it stands for.
  std::map<SampleIndex, std::vector<SampleIndex>> assigned;
  /// Prior positions (cell units of this node's grid) of representatives
  /// carried over from the parent.
  std::map<SampleIndex, Point> anchor_positions;

  GridLayout input;  // anchored input layout fed to the pipeline
  GridLayout layout; // final layout
  MeasureReport report;

  std::size_t pool_size() const;
  /// Representative shown at `cell`, or nullopt for an empty cell.
  std::optional<SampleIndex> sample_at(CellIndex cell) const;
};

struct HierarchyOptions {
  PipelineId pipeline = PipelineId::G_L_T;
  PipelineOptions phases;
};

/// Top level. Chooses min(n, capacity) representatives by seeded stratified
/// sampling (cluster quotas by largest remainder, every non-empty cluster gets
/// at least one), assigns every other sample to its nearest representative in
/// the projection and lays out the representatives. Throws
/// Error("invalid_samples") on an empty set.
HierarchyNode build_root(std::shared_ptr<const SampleSet> samples, const GridSpec& spec,
                         std::uint64_t seed, const HierarchyOptions& options = {},
                         std::string id = "root");

/// Child node for a selection of cells of `node`. The pool is the selected
/// representatives plus their hidden samples; all selected representatives
/// are kept and the remaining capacity is split among them in proportion to
/// their hidden-sample counts. Carried representatives are anchored at their
/// parent cells rescaled from the selection's bounding box into the child grid;
/// the other pool samples are placed through a per-axis linear fit of those
/// anchors against the projection. Throws Error("invalid_selection") for an
/// empty selection, out-of-range or empty cells, or more selected cells than
/// the child grid holds.
HierarchyNode zoom(const HierarchyNode& node, const std::vector<Cell>& selected,
                   const GridSpec& spec, std::uint64_t seed, std::string child_id,
                   const HierarchyOptions& options = {});

/// Fraction of (pair, axis) comparisons among the carried representatives of
/// `child` whose strict left/right or above/below order in `parent` is kept
/// in `child`. Pairs level on an axis in the parent are skipped; returns 1
/// when nothing is comparable.
double ordering_agreement(const HierarchyNode& parent, const HierarchyNode& child);

/// Deterministic seed for a zoom: FNV-1a over the session seed, the node id
/// and the selected cells in sorted order.
std::uint64_t child_seed(std::uint64_t session_seed, const std::string& node_id,
                         std::vector<Cell> selected);

} // namespace gridweave
