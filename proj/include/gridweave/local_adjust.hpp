#pragma once

#include <cstdint>
#include <vector>

#include "gridweave/measures.hpp"
#include "gridweave/model.hpp"

namespace gridweave {

/// Cells with at least one 8-neighbor carrying a different non-empty label.
/// Empty cells are never boundary cells. Ascending order.
std::vector<CellIndex> boundary_cells(const GridLayout& layout);

struct SwapEvaluation {
  double gain = 0.0;         // change in layout_convexity
  double prox_penalty = 0.0; // change in proximity_raw against the reference
};

/// Scores exchanging the samples of cells `a` and `b`, re-scoring only the
/// two affected clusters. Throws Error("invalid_swap") unless both are
/// boundary cells of different clusters.
SwapEvaluation evaluate_swap(const GridLayout& layout, CellIndex a, CellIndex b,
                             ConvexityMeasure m, const GridLayout& reference);

struct SwapRecord {
  CellIndex a = 0;
  CellIndex b = 0;
  double gain = 0.0;
  double before = 0.0; // layout convexity before the swap
  double after = 0.0;  // and after; recomputed from scratch when auditing
};

struct LocalOptions {
  int max_passes = 10;
  double gain_threshold = 1e-12;
  bool audit = false; // recompute the full layout score after every swap
};

struct LocalResult {
  GridLayout layout;
  int swaps = 0;
  int passes = 0;
  double initial_score = 0.0;
  double final_score = 0.0;
  std::vector<SwapRecord> log;
};

/// Greedy boundary-swap phase. Each pass visits a seeded shuffle of the
/// boundary cells; a visited cell that is still on the boundary takes the
/// best positive-gain swap with any boundary cell of another cluster (ties go
/// to the smaller proximity penalty, then the smaller partner index). Passes
/// repeat until one accepts nothing, at most `max_passes` times.
LocalResult local_adjust(const GridLayout& layout, ConvexityMeasure m, std::uint64_t seed,
                         const GridLayout& reference, const LocalOptions& options = {});

} // namespace gridweave
