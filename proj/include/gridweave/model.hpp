#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridweave {

/// Library-wide error. `code()` is a short machine-readable tag
/// (e.g. "invalid_layout", "parse_error") surfaced by the CLI and service.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

using ClusterId = std::int32_t;
using CellIndex = std::int32_t;
using SampleIndex = std::int32_t;

inline constexpr ClusterId kEmptyCluster = -1;
inline constexpr SampleIndex kNoSample = -1;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Lattice coordinate of a grid cell.
struct Cell {
  int col = 0;
  int row = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Sample {
  std::string id;
  Point position;
  ClusterId cluster = 0;
  std::map<std::string, std::string> meta;
  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Dense row-major square matrix.
struct SimilarityMatrix {
  std::size_t n = 0;
  std::vector<double> values;
  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  friend bool operator==(const SimilarityMatrix&, const SimilarityMatrix&) = default;
};

/// Samples plus their cluster vocabulary. Cluster ids index `cluster_names`,
/// which loaders keep sorted so that id order matches name order.
struct SampleSet {
  std::vector<Sample> samples;
  std::vector<std::string> cluster_names;
  std::optional<SimilarityMatrix> similarities;

  std::size_t size() const { return samples.size(); }
  std::vector<ClusterId> clusters() const;
  std::optional<SampleIndex> find(const std::string& id) const;
  const std::string& cluster_name(ClusterId c) const;
};

/// Throws Error("invalid_samples") on duplicate ids, unknown cluster ids,
/// non-finite positions or a malformed similarity matrix.
void validate_samples(const SampleSet& samples);

/// Returns a SampleSet restricted to `indices`, preserving their order.
SampleSet subset(const SampleSet& samples, const std::vector<SampleIndex>& indices);

struct GridSpec {
  int width = 1;
  int height = 1;

  int capacity() const { return width * height; }
  double diagonal() const;
  CellIndex index(Cell c) const { return c.row * width + c.col; }
  Cell cell(CellIndex i) const { return {i % width, i / width}; }
  bool contains(Cell c) const { return c.col >= 0 && c.row >= 0 && c.col < width && c.row < height; }
  /// Center of a cell in cell units: (col + 0.5, row + 0.5).
  Point center(CellIndex i) const {
    const Cell c = cell(i);
    return {c.col + 0.5, c.row + 0.5};
  }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Throws Error("invalid_grid") unless width, height >= 1.
void validate_grid(const GridSpec& spec);

/// Parses "WxH".
GridSpec parse_grid(const std::string& text);

struct Assignment {
  std::vector<CellIndex> cell_of;     // sample -> cell
  std::vector<SampleIndex> sample_of; // cell -> sample or kNoSample
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// A grid with samples placed on distinct cells. `sample_clusters` carries the
/// cluster of every sample so a layout can be checked without its SampleSet.
struct GridLayout {
  GridSpec spec;
  Assignment assignment;
  std::vector<ClusterId> labels;          // cell -> cluster or kEmptyCluster
  std::vector<ClusterId> sample_clusters; // sample -> cluster

  std::size_t sample_count() const { return sample_clusters.size(); }
  Point position_of(SampleIndex s) const { return spec.center(assignment.cell_of[s]); }
  /// Distinct non-empty cluster ids, ascending.
  std::vector<ClusterId> cluster_ids() const;
  friend bool operator==(const GridLayout&, const GridLayout&) = default;
};

/// Builds a consistent layout from a sample -> cell map. Throws
/// Error("invalid_layout") if the map is not injective or out of range.
GridLayout make_layout(const GridSpec& spec, std::vector<ClusterId> sample_clusters,
                       std::vector<CellIndex> cell_of);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_layout(const GridLayout& layout);

/// Throws Error("invalid_layout") listing the violations.
void require_valid(const GridLayout& layout);

/// Corner-unit integer point; cell (c, r) spans [c, c+1] x [r, r+1].
struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

using Ring = std::vector<LatticePoint>;

struct ClusterShape {
  ClusterId cluster = kEmptyCluster;
  std::vector<Cell> cells;  // sorted by (col, row)
  std::vector<Ring> boundary; // outer rings counterclockwise, holes clockwise
};

/// Traces the 4-connected boundary of a cell set. Vertices are polygon corners
/// only (collinear runs are merged). Diagonal pinches stay separate rings.
std::vector<Ring> trace_boundary(const std::vector<Cell>& cells);

std::vector<ClusterShape> extract_cluster_shapes(const GridLayout& layout);

} // namespace gridweave
