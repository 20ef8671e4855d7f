#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridweave/model.hpp"

namespace gridweave {

/// Simple polygon on lattice points (corner units). Hulls are counterclockwise.
struct Polygon {
  std::vector<LatticePoint> vertices;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

/// Andrew's monotone chain; drops collinear vertices. Starts at the
/// lexicographically smallest point. Throws Error("degenerate_hull") when all
/// points are collinear or fewer than three distinct points are given.
Polygon convex_hull(std::span<const LatticePoint> points);

/// Hull of the union of unit squares. Only row-extreme cell corners can be
/// hull vertices, so at most four points per occupied row are considered.
Polygon cell_hull(std::span<const Cell> cells);

/// Twice the signed shoelace area (exact).
std::int64_t twice_signed_area(std::span<const LatticePoint> ring);

/// Absolute shoelace area.
double polygon_area(const Polygon& p);

double polygon_perimeter(const Polygon& p);

/// Membership bitmap over a rectangular window of the lattice.
class CellMask {
public:
  CellMask(int min_col, int min_row, int width, int height);
  static CellMask covering(std::span<const Cell> cells);

  bool in_window(Cell c) const {
    return c.col >= min_col_ && c.row >= min_row_ && c.col < min_col_ + width_ &&
           c.row < min_row_ + height_;
  }
  bool test(Cell c) const { return in_window(c) && bits_[offset(c)] != 0; }
  void set(Cell c, bool on = true) { bits_[offset(c)] = on ? 1 : 0; }

private:
  std::size_t offset(Cell c) const {
    return static_cast<std::size_t>(c.row - min_row_) * width_ + (c.col - min_col_);
  }
  int min_col_, min_row_, width_, height_;
  std::vector<std::uint8_t> bits_;
};

struct TripleCounts {
  std::int64_t total = 0;
  std::int64_t satisfied = 0;
  friend bool operator==(const TripleCounts&, const TripleCounts&) = default;
  TripleCounts& operator+=(const TripleCounts& o) {
    total += o.total;
    satisfied += o.satisfied;
    return *this;
  }
  TripleCounts& operator-=(const TripleCounts& o) {
    total -= o.total;
    satisfied -= o.satisfied;
    return *this;
  }
};

/// For every unordered pair (X, Z) of cells, each lattice cell center strictly
/// inside the segment XZ is one triple; it is satisfied when that middle cell
/// is itself in the set.
TripleCounts collinear_triple_counts(std::span<const Cell> cells);

/// Change in triple counts when `added` joins `members` (which must not
/// contain it).
TripleCounts triple_insertion_delta(std::span<const Cell> members, Cell added);

/// Total length of the shortest straight links that join the 4-connected
/// components of a cell union, measured between the closest points of their
/// squares (a minimum spanning tree). 0 for a connected union.
double component_link_length(std::span<const Cell> cells);

/// Unit segment on the boundary of a cell union. Endpoints may be given in
/// either order.
struct UnitEdge {
  LatticePoint a;
  LatticePoint b;
};

/// All unit boundary edges of a cell set, oriented with the interior on the
/// left.
std::vector<UnitEdge> boundary_edges(std::span<const Cell> cells);

/// Fraction of the cell area lying on the interior side of the supporting
/// line of `edge`. Throws Error("not_boundary") if `edge` is not a unit
/// boundary edge of `cells`.
double halfplane_area_fraction(std::span<const Cell> cells, const UnitEdge& edge);
double halfplane_area_fraction(const ClusterShape& shape, const UnitEdge& edge);

/// Total boundary length of a cell union (number of unit boundary edges).
std::int64_t boundary_length(std::span<const Cell> cells);

} // namespace gridweave
