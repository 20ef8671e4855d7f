#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>

#include "gridweave/model.hpp"

namespace gridweave {

enum class ConvexityMeasure { Area, Triple, Perimeter, Cut };

inline constexpr ConvexityMeasure kAllMeasures[] = {
    ConvexityMeasure::Area, ConvexityMeasure::Triple, ConvexityMeasure::Perimeter,
    ConvexityMeasure::Cut};

std::string_view to_string(ConvexityMeasure m);
ConvexityMeasure parse_measure(std::string_view name);

/// Sum over samples of the squared distance between a sample's cell in
/// `layout` and its cell in `input`.
double proximity_raw(const GridLayout& layout, const GridLayout& input);

/// Similarity-driven proximity: sum over ordered pairs of
/// (w * grid distance - (1 - similarity))^2 with w = 1 / grid diagonal.
double proximity_similarity(const GridLayout& layout, const SimilarityMatrix& sims);

/// Mean cell center per cluster present in the layout.
std::map<ClusterId, Point> cluster_centers(const GridLayout& layout);

/// Sum over samples of the squared distance to the sample's cluster center.
double compactness_raw(const GridLayout& layout);

/// Score in (0, 1] of a cell union under one convexity measure.
///  - Area: cell count over hull area.
///  - Triple: satisfied over total collinear triples (1 when there are none).
///  - Perimeter: hull perimeter over boundary length, holes included.
///  - Cut: mean over unit boundary edges of the interior half-plane fraction.
double convexity(std::span<const Cell> cells, ConvexityMeasure m);
double convexity(const ClusterShape& shape, ConvexityMeasure m);

/// Unweighted mean of the per-cluster scores. Throws Error("no_clusters")
/// for a layout without samples.
double layout_convexity(const GridLayout& layout, ConvexityMeasure m);

struct MeasureReport {
  double proximity = 1.0;
  double compactness = 1.0;
  double area_ratio = 1.0;
  double triple_ratio = 1.0;
  double perimeter_ratio = 1.0;
  double cut_ratio = 1.0;
  double prox2 = 0.0; // raw proximity_raw value
  double comp = 0.0;  // raw compactness_raw value

  double score(ConvexityMeasure m) const;
};

/// Six normalized scores: proximity = exp(-prox2 / (n D^2)),
/// compactness = exp(-comp / (n D^2)) with D the grid diagonal, plus the four
/// layout convexity scores. Throws Error("incompatible_layouts") unless both
/// layouts share grid and samples.
MeasureReport report(const GridLayout& layout, const GridLayout& input);

void require_compatible(const GridLayout& a, const GridLayout& b);

} // namespace gridweave
