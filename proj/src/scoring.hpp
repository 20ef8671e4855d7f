#pragma once

// Per-shape scoring against an explicit membership mask. The mask must mark
// exactly `cells` and cover their one-cell neighborhood or report absent
// outside its window.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gridweave/geometry.hpp"
#include "gridweave/measures.hpp"

namespace gridweave::detail {

double area_ratio(std::span<const Cell> cells);
double perimeter_ratio(std::span<const Cell> cells, const CellMask& mask);
double cut_ratio(std::span<const Cell> cells, const CellMask& mask);
std::int64_t boundary_length(std::span<const Cell> cells, const CellMask& mask);

inline double triple_ratio(const TripleCounts& t) {
  return t.total == 0 ? 1.0 : static_cast<double>(t.satisfied) / static_cast<double>(t.total);
}

/// Triple-count change for inserting one cell, with lookup tables sized for
/// offsets below (width, height). Members sharing a primitive direction from
/// the inserted cell are bucketed, so no lattice walks are needed.
class TripleKernel {
public:
  TripleKernel(int width, int height);
  /// `skip`, when given, is treated as absent from `members`.
  TripleCounts insertion(std::span<const Cell> members, Cell added, const Cell* skip = nullptr);

private:
  int w_, h_, span_;
  std::vector<int> gcd_;
  std::vector<std::int32_t> count_;
  std::vector<int> touched_;
};

/// Packed membership bits, one row of 64-bit words per lattice row, over
/// window coordinates [0, width) x [0, height).
class BitRows {
public:
  BitRows(int width, int height);
  int width() const { return width_; }
  int height() const { return height_; }
  bool test(int col, int row) const {
    return col >= 0 && row >= 0 && col < width_ && row < height_ &&
           ((word(col, row) >> (col & 63)) & 1U) != 0;
  }
  void set(int col, int row, bool on = true) {
    const std::uint64_t bit = std::uint64_t{1} << (col & 63);
    std::uint64_t& w = word(col, row);
    w = on ? (w | bit) : (w & ~bit);
  }
  /// First and last set column of a row; {-1, -1} when the row is empty.
  std::pair<int, int> extent(int row) const;
  /// Appends the maximal runs [first, last] of set columns in a row.
  void runs(int row, std::vector<std::pair<int, int>>& out) const;

private:
  std::uint64_t& word(int col, int row) { return words_[row * stride_ + (col >> 6)]; }
  std::uint64_t word(int col, int row) const { return words_[row * stride_ + (col >> 6)]; }

  int width_, height_, stride_;
  std::vector<std::uint64_t> words_;
};

/// component_link_length over packed rows, reusing its buffers across calls.
class ComponentLinker {
public:
  double link_length(const BitRows& rows);
  /// Number of 4-connected components found by the last call.
  int components() const { return components_; }

private:
  struct Run {
    int row, first, last, parent;
  };
  int root(int i);

  std::vector<Run> runs_;
  std::vector<std::pair<int, int>> row_runs_;
  std::vector<int> comp_;
  std::vector<std::int64_t> gap_;
  int components_ = 0;
};

/// Non-triple measures only.
double shape_score(std::span<const Cell> cells, ConvexityMeasure m, const CellMask& mask);

} // namespace gridweave::detail
