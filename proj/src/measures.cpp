#include "gridweave/measures.hpp"

#include <algorithm>
#include <cmath>

#include "gridweave/geometry.hpp"
#include "scoring.hpp"

namespace gridweave {

std::string_view to_string(ConvexityMeasure m) {
  switch (m) {
  case ConvexityMeasure::Area: return "area";
  case ConvexityMeasure::Triple: return "triple";
  case ConvexityMeasure::Perimeter: return "perimeter";
  case ConvexityMeasure::Cut: return "cut";
  }
  return "?";
}

ConvexityMeasure parse_measure(std::string_view name) {
  for (ConvexityMeasure m : kAllMeasures)
    if (to_string(m) == name) return m;
  throw Error("invalid_argument", "unknown convexity measure '" + std::string(name) + "'");
}

void require_compatible(const GridLayout& a, const GridLayout& b) {
  if (!(a.spec == b.spec))
    throw Error("incompatible_layouts", "layouts use different grids");
  if (a.sample_clusters != b.sample_clusters)
    throw Error("incompatible_layouts", "layouts place different sample sets");
}

double proximity_raw(const GridLayout& layout, const GridLayout& input) {
  require_compatible(layout, input);
  double sum = 0.0;
  for (std::size_t s = 0; s < layout.sample_count(); ++s) {
    const auto i = static_cast<SampleIndex>(s);
    sum += squared_distance(layout.position_of(i), input.position_of(i));
  }
  return sum;
}

double proximity_similarity(const GridLayout& layout, const SimilarityMatrix& sims) {
  const std::size_t n = layout.sample_count();
  if (sims.n != n || sims.values.size() != n * n)
    throw Error("dimension_mismatch", "similarity matrix does not match the sample count");
  const double w = 1.0 / layout.spec.diagonal();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point pi = layout.position_of(static_cast<SampleIndex>(i));
    for (std::size_t j = 0; j < n; ++j) {
      const Point pj = layout.position_of(static_cast<SampleIndex>(j));
      const double term = w * std::sqrt(squared_distance(pi, pj)) - (1.0 - sims.at(i, j));
      sum += term * term;
    }
  }
  return sum;
}

std::map<ClusterId, Point> cluster_centers(const GridLayout& layout) {
  std::map<ClusterId, std::pair<Point, std::size_t>> acc;
  for (std::size_t s = 0; s < layout.sample_count(); ++s) {
    auto& [sum, count] = acc[layout.sample_clusters[s]];
    const Point p = layout.position_of(static_cast<SampleIndex>(s));
    sum.x += p.x;
    sum.y += p.y;
    ++count;
  }
  std::map<ClusterId, Point> centers;
  for (const auto& [id, entry] : acc)
    centers[id] = {entry.first.x / entry.second, entry.first.y / entry.second};
  return centers;
}

double compactness_raw(const GridLayout& layout) {
  const auto centers = cluster_centers(layout);
  double sum = 0.0;
  for (std::size_t s = 0; s < layout.sample_count(); ++s)
    sum += squared_distance(layout.position_of(static_cast<SampleIndex>(s)),
                            centers.at(layout.sample_clusters[s]));
  return sum;
}

namespace detail {

std::int64_t boundary_length(std::span<const Cell> cells, const CellMask& mask) {
  std::int64_t n = 0;
  for (const Cell& c : cells) {
    n += !mask.test({c.col, c.row - 1});
    n += !mask.test({c.col + 1, c.row});
    n += !mask.test({c.col, c.row + 1});
    n += !mask.test({c.col - 1, c.row});
  }
  return n;
}

double area_ratio(std::span<const Cell> cells) {
  return static_cast<double>(cells.size()) / polygon_area(cell_hull(cells));
}

double perimeter_ratio(std::span<const Cell> cells, const CellMask& mask) {
  // Links between components are walked on both sides, as if traced around.
  const double boundary = static_cast<double>(boundary_length(cells, mask)) +
                          2.0 * component_link_length(cells);
  return polygon_perimeter(cell_hull(cells)) / boundary;
}

double cut_ratio(std::span<const Cell> cells, const CellMask& mask) {
  int c0 = cells[0].col, c1 = c0, r0 = cells[0].row, r1 = r0;
  for (const Cell& c : cells) {
    c0 = std::min(c0, c.col);
    c1 = std::max(c1, c.col);
    r0 = std::min(r0, c.row);
    r1 = std::max(r1, c.row);
  }
  // at_most_col[i] = cells with col <= c0 + i; likewise for rows.
  std::vector<std::int64_t> at_most_col(c1 - c0 + 1, 0), at_most_row(r1 - r0 + 1, 0);
  for (const Cell& c : cells) {
    ++at_most_col[c.col - c0];
    ++at_most_row[c.row - r0];
  }
  for (std::size_t i = 1; i < at_most_col.size(); ++i) at_most_col[i] += at_most_col[i - 1];
  for (std::size_t i = 1; i < at_most_row.size(); ++i) at_most_row[i] += at_most_row[i - 1];
  const auto n = static_cast<std::int64_t>(cells.size());
  auto cols_le = [&](int col) { return col < c0 ? 0 : at_most_col[col - c0]; };
  auto rows_le = [&](int row) { return row < r0 ? 0 : at_most_row[row - r0]; };

  std::int64_t edges = 0, inside = 0;
  for (const Cell& c : cells) {
    if (!mask.test({c.col - 1, c.row})) { ++edges; inside += n - cols_le(c.col - 1); }
    if (!mask.test({c.col + 1, c.row})) { ++edges; inside += cols_le(c.col); }
    if (!mask.test({c.col, c.row - 1})) { ++edges; inside += n - rows_le(c.row - 1); }
    if (!mask.test({c.col, c.row + 1})) { ++edges; inside += rows_le(c.row); }
  }
  return static_cast<double>(inside) / (static_cast<double>(edges) * static_cast<double>(n));
}

double shape_score(std::span<const Cell> cells, ConvexityMeasure m, const CellMask& mask) {
  switch (m) {
  case ConvexityMeasure::Area: return area_ratio(cells);
  case ConvexityMeasure::Perimeter: return perimeter_ratio(cells, mask);
  case ConvexityMeasure::Cut: return cut_ratio(cells, mask);
  case ConvexityMeasure::Triple: break;
  }
  throw Error("internal", "shape_score does not handle the triple ratio");
}

} // namespace detail

double convexity(std::span<const Cell> cells, ConvexityMeasure m) {
  if (cells.empty()) throw Error("invalid_shape", "shape has no cells");
  if (m == ConvexityMeasure::Triple) return detail::triple_ratio(collinear_triple_counts(cells));
  return detail::shape_score(cells, m, CellMask::covering(cells));
}

double convexity(const ClusterShape& shape, ConvexityMeasure m) {
  return convexity(std::span<const Cell>(shape.cells), m);
}

double layout_convexity(const GridLayout& layout, ConvexityMeasure m) {
  const auto shapes = extract_cluster_shapes(layout);
  if (shapes.empty()) throw Error("no_clusters", "layout has no clusters");
  double sum = 0.0;
  for (const auto& shape : shapes) sum += convexity(shape, m);
  return sum / static_cast<double>(shapes.size());
}

double MeasureReport::score(ConvexityMeasure m) const {
  switch (m) {
  case ConvexityMeasure::Area: return area_ratio;
  case ConvexityMeasure::Triple: return triple_ratio;
  case ConvexityMeasure::Perimeter: return perimeter_ratio;
  case ConvexityMeasure::Cut: return cut_ratio;
  }
  return 0.0;
}

MeasureReport report(const GridLayout& layout, const GridLayout& input) {
  require_compatible(layout, input);
  require_valid(layout);
  const double n = static_cast<double>(layout.sample_count());
  if (n == 0) throw Error("no_clusters", "layout has no samples");
  const double d = layout.spec.diagonal();
  const double scale = n * d * d;

  MeasureReport r;
  r.prox2 = proximity_raw(layout, input);
  r.comp = compactness_raw(layout);
  r.proximity = std::exp(-r.prox2 / scale);
  r.compactness = std::exp(-r.comp / scale);

  const auto shapes = extract_cluster_shapes(layout);
  double sums[4] = {0, 0, 0, 0};
  for (const auto& shape : shapes)
    for (int k = 0; k < 4; ++k) sums[k] += convexity(shape, kAllMeasures[k]);
  const double count = static_cast<double>(shapes.size());
  r.area_ratio = sums[0] / count;
  r.triple_ratio = sums[1] / count;
  r.perimeter_ratio = sums[2] / count;
  r.cut_ratio = sums[3] / count;
  return r;
}

} // namespace gridweave
