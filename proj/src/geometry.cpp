#include "gridweave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scoring.hpp"

namespace gridweave {

namespace {

std::int64_t cross(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

} // namespace

Polygon convex_hull(std::span<const LatticePoint> input) {
  std::vector<LatticePoint> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw Error("degenerate_hull", "hull needs three non-collinear points");

  std::vector<LatticePoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw Error("degenerate_hull", "all points are collinear");
  return Polygon{std::move(hull)};
}

Polygon cell_hull(std::span<const Cell> cells) {
  if (cells.empty()) throw Error("degenerate_hull", "hull needs three non-collinear points");
  int r0 = cells[0].row, r1 = r0;
  for (const Cell& c : cells) {
    r0 = std::min(r0, c.row);
    r1 = std::max(r1, c.row);
  }
  constexpr int kUnset = std::numeric_limits<int>::max();
  std::vector<std::pair<int, int>> rows(r1 - r0 + 1, {kUnset, kUnset});
  for (const Cell& c : cells) {
    auto& span = rows[c.row - r0];
    if (span.first == kUnset) {
      span = {c.col, c.col};
    } else {
      span.first = std::min(span.first, c.col);
      span.second = std::max(span.second, c.col);
    }
  }
  std::vector<LatticePoint> pts;
  pts.reserve(rows.size() * 4);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& span = rows[k];
    if (span.first == kUnset) continue;
    const std::int64_t row = r0 + static_cast<int>(k);
    pts.push_back({span.first, row});
    pts.push_back({span.first, row + 1});
    pts.push_back({span.second + 1, row});
    pts.push_back({span.second + 1, row + 1});
  }
  return convex_hull(pts);
}

std::int64_t twice_signed_area(std::span<const LatticePoint> ring) {
  std::int64_t sum = 0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = ring[i];
    const auto& q = ring[(i + 1) % n];
    sum += p.x * q.y - q.x * p.y;
  }
  return sum;
}

double polygon_area(const Polygon& p) {
  return std::abs(static_cast<double>(twice_signed_area(p.vertices))) / 2.0;
}

double polygon_perimeter(const Polygon& p) {
  double sum = 0.0;
  const std::size_t n = p.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = p.vertices[i];
    const auto& b = p.vertices[(i + 1) % n];
    sum += std::hypot(static_cast<double>(b.x - a.x), static_cast<double>(b.y - a.y));
  }
  return sum;
}

CellMask::CellMask(int min_col, int min_row, int width, int height)
    : min_col_(min_col), min_row_(min_row), width_(std::max(width, 0)),
      height_(std::max(height, 0)),
      bits_(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), 0) {}

CellMask CellMask::covering(std::span<const Cell> cells) {
  if (cells.empty()) return CellMask(0, 0, 0, 0);
  int c0 = cells[0].col, c1 = c0, r0 = cells[0].row, r1 = r0;
  for (const Cell& c : cells) {
    c0 = std::min(c0, c.col);
    c1 = std::max(c1, c.col);
    r0 = std::min(r0, c.row);
    r1 = std::max(r1, c.row);
  }
  CellMask mask(c0, r0, c1 - c0 + 1, r1 - r0 + 1);
  for (const Cell& c : cells) mask.set(c);
  return mask;
}

TripleCounts collinear_triple_counts(std::span<const Cell> cells) {
  const CellMask mask = CellMask::covering(cells);
  TripleCounts out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      const int dx = cells[j].col - cells[i].col;
      const int dy = cells[j].row - cells[i].row;
      const int g = std::gcd(std::abs(dx), std::abs(dy));
      if (g < 2) continue;
      out.total += g - 1;
      const int sx = dx / g, sy = dy / g;
      for (int k = 1; k < g; ++k)
        if (mask.test({cells[i].col + k * sx, cells[i].row + k * sy})) ++out.satisfied;
    }
  }
  return out;
}

TripleCounts triple_insertion_delta(std::span<const Cell> members, Cell added) {
  int w = 1, h = 1;
  for (const Cell& m : members) {
    w = std::max(w, std::abs(m.col - added.col) + 1);
    h = std::max(h, std::abs(m.row - added.row) + 1);
  }
  detail::TripleKernel kernel(w, h);
  return kernel.insertion(members, added);
}

double component_link_length(std::span<const Cell> cells) {
  if (cells.size() < 2) return 0.0;
  int c0 = cells[0].col, c1 = c0, r0 = cells[0].row, r1 = r0;
  for (const Cell& c : cells) {
    c0 = std::min(c0, c.col);
    c1 = std::max(c1, c.col);
    r0 = std::min(r0, c.row);
    r1 = std::max(r1, c.row);
  }
  detail::BitRows rows(c1 - c0 + 1, r1 - r0 + 1);
  for (const Cell& c : cells) rows.set(c.col - c0, c.row - r0);
  detail::ComponentLinker linker;
  return linker.link_length(rows);
}

namespace detail {

TripleKernel::TripleKernel(int width, int height)
    : w_(std::max(width, 1)), h_(std::max(height, 1)), span_(2 * h_ - 1),
      gcd_(static_cast<std::size_t>(w_) * h_), count_(static_cast<std::size_t>(2 * w_ - 1) * span_, 0) {
  for (int dx = 0; dx < w_; ++dx)
    for (int dy = 0; dy < h_; ++dy) gcd_[static_cast<std::size_t>(dx) * h_ + dy] = std::gcd(dx, dy);
}

TripleCounts TripleKernel::insertion(std::span<const Cell> members, Cell added, const Cell* skip) {
  TripleCounts out;
  for (const Cell& m : members) {
    if (skip != nullptr && m == *skip) continue;
    const int dx = m.col - added.col;
    const int dy = m.row - added.row;
    const int g = gcd_[static_cast<std::size_t>(std::abs(dx)) * h_ + std::abs(dy)];
    if (g == 0) continue;
    out.total += g - 1;
    const int key = (dx / g + w_ - 1) * span_ + (dy / g + h_ - 1);
    if (count_[key]++ == 0) touched_.push_back(key);
  }
  // Members on one ray from `added` are middles of the new pairs with the
  // farther members of that ray; members on opposite rays form the old pairs
  // that now have `added` as a middle.
  const int mirror = static_cast<int>(count_.size()) - 1;
  std::int64_t across = 0;
  for (int key : touched_) {
    const std::int64_t c = count_[key];
    out.satisfied += c * (c - 1) / 2;
    across += c * count_[mirror - key];
  }
  out.satisfied += across / 2;
  for (int key : touched_) count_[key] = 0;
  touched_.clear();
  return out;
}

BitRows::BitRows(int width, int height)
    : width_(std::max(width, 0)), height_(std::max(height, 0)), stride_((width_ + 63) / 64),
      words_(static_cast<std::size_t>(stride_) * height_, 0) {}

std::pair<int, int> BitRows::extent(int row) const {
  const std::uint64_t* w = &words_[static_cast<std::size_t>(row) * stride_];
  int first = -1, last = -1;
  for (int k = 0; k < stride_; ++k) {
    if (w[k] == 0) continue;
    if (first < 0) first = k * 64 + __builtin_ctzll(w[k]);
    last = k * 64 + 63 - __builtin_clzll(w[k]);
  }
  return {first, last};
}

void BitRows::runs(int row, std::vector<std::pair<int, int>>& out) const {
  const std::uint64_t* w = &words_[static_cast<std::size_t>(row) * stride_];
  // First column at or after `col` whose bit equals `value`, or stride * 64.
  auto next = [&](int col, bool value) {
    for (int k = col >> 6; k < stride_; ++k) {
      std::uint64_t bits = value ? w[k] : ~w[k];
      if (k == col >> 6) bits &= ~std::uint64_t{0} << (col & 63);
      if (bits != 0) return k * 64 + __builtin_ctzll(bits);
    }
    return stride_ * 64;
  };
  for (int col = 0; col < width_;) {
    const int first = next(col, true);
    if (first >= width_) break;
    const int end = next(first, false);
    out.push_back({first, end - 1});
    col = end;
  }
}

int ComponentLinker::root(int i) {
  while (runs_[i].parent != i) {
    runs_[i].parent = runs_[runs_[i].parent].parent;
    i = runs_[i].parent;
  }
  return i;
}

double ComponentLinker::link_length(const BitRows& rows) {
  runs_.clear();
  std::size_t prev_begin = 0, prev_end = 0;
  for (int y = 0; y < rows.height(); ++y) {
    row_runs_.clear();
    rows.runs(y, row_runs_);
    const std::size_t begin = runs_.size();
    std::size_t p = prev_begin;
    for (const auto& [first, last] : row_runs_) {
      const int id = static_cast<int>(runs_.size());
      runs_.push_back({y, first, last, id});
      // Join with overlapping runs of the previous row.
      while (p < prev_end && runs_[p].last < first) ++p;
      for (std::size_t q = p; q < prev_end && runs_[q].first <= last; ++q) {
        const int a = root(static_cast<int>(q)), b = root(id);
        if (a != b) runs_[std::max(a, b)].parent = std::min(a, b);
      }
    }
    prev_begin = begin;
    prev_end = runs_.size();
  }
  comp_.assign(runs_.size(), -1);
  int count = 0;
  for (std::size_t i = 0; i < runs_.size(); ++i) {
    const int r = root(static_cast<int>(i));
    if (comp_[r] < 0) comp_[r] = count++;
    comp_[i] = comp_[r];
  }
  components_ = count;
  if (count <= 1) return 0.0;

  // Squared gap between the closest squares of each pair of components.
  constexpr std::int64_t kFar = std::numeric_limits<std::int64_t>::max();
  gap_.assign(static_cast<std::size_t>(count) * count, kFar);
  for (std::size_t a = 0; a < runs_.size(); ++a) {
    const Run& p = runs_[a];
    for (std::size_t b = a + 1; b < runs_.size(); ++b) {
      if (comp_[a] == comp_[b]) continue;
      const Run& q = runs_[b];
      const std::int64_t dx = std::max({q.first - p.last - 1, p.first - q.last - 1, 0});
      const std::int64_t dy = std::max(std::abs(p.row - q.row) - 1, 0);
      auto& g = gap_[static_cast<std::size_t>(std::min(comp_[a], comp_[b])) * count +
                     std::max(comp_[a], comp_[b])];
      g = std::min(g, dx * dx + dy * dy);
    }
  }
  // Prim's minimum spanning tree over components.
  auto gap = [&](int a, int b) {
    return gap_[static_cast<std::size_t>(std::min(a, b)) * count + std::max(a, b)];
  };
  std::vector<std::int64_t> best(count, kFar);
  std::vector<bool> done(count, false);
  best[0] = 0;
  double length = 0.0;
  for (int step = 0; step < count; ++step) {
    int u = -1;
    for (int k = 0; k < count; ++k)
      if (!done[k] && (u < 0 || best[k] < best[u])) u = k;
    done[u] = true;
    length += std::sqrt(static_cast<double>(best[u]));
    for (int k = 0; k < count; ++k)
      if (!done[k]) best[k] = std::min(best[k], gap(u, k));
  }
  return length;
}

} // namespace detail

std::vector<UnitEdge> boundary_edges(std::span<const Cell> cells) {
  const CellMask mask = CellMask::covering(cells);
  std::vector<UnitEdge> edges;
  for (const Cell& c : cells) {
    const std::int64_t x = c.col, y = c.row;
    if (!mask.test({c.col, c.row - 1})) edges.push_back({{x, y}, {x + 1, y}});
    if (!mask.test({c.col + 1, c.row})) edges.push_back({{x + 1, y}, {x + 1, y + 1}});
    if (!mask.test({c.col, c.row + 1})) edges.push_back({{x + 1, y + 1}, {x, y + 1}});
    if (!mask.test({c.col - 1, c.row})) edges.push_back({{x, y + 1}, {x, y}});
  }
  return edges;
}

std::int64_t boundary_length(std::span<const Cell> cells) {
  const CellMask mask = CellMask::covering(cells);
  std::int64_t n = 0;
  for (const Cell& c : cells) {
    n += !mask.test({c.col, c.row - 1});
    n += !mask.test({c.col + 1, c.row});
    n += !mask.test({c.col, c.row + 1});
    n += !mask.test({c.col - 1, c.row});
  }
  return n;
}

double halfplane_area_fraction(std::span<const Cell> cells, const UnitEdge& edge) {
  const CellMask mask = CellMask::covering(cells);
  const std::int64_t dx = edge.b.x - edge.a.x;
  const std::int64_t dy = edge.b.y - edge.a.y;
  if (std::abs(dx) + std::abs(dy) != 1 || cells.empty())
    throw Error("not_boundary", "edge is not a unit segment");

  // The two cells sharing the edge; exactly one must belong to the set.
  Cell lo, hi;
  const bool vertical = dx == 0;
  if (vertical) {
    const auto x = static_cast<int>(edge.a.x);
    const auto y = static_cast<int>(std::min(edge.a.y, edge.b.y));
    lo = {x - 1, y};
    hi = {x, y};
  } else {
    const auto x = static_cast<int>(std::min(edge.a.x, edge.b.x));
    const auto y = static_cast<int>(edge.a.y);
    lo = {x, y - 1};
    hi = {x, y};
  }
  const bool lo_in = mask.test(lo), hi_in = mask.test(hi);
  if (lo_in == hi_in) throw Error("not_boundary", "edge does not separate the shape from outside");

  // Interior side is the side of the member cell.
  std::size_t count = 0;
  for (const Cell& c : cells) {
    if (vertical) {
      const auto line = edge.a.x;
      if (lo_in ? c.col < line : c.col >= line) ++count;
    } else {
      const auto line = edge.a.y;
      if (lo_in ? c.row < line : c.row >= line) ++count;
    }
  }
  return static_cast<double>(count) / static_cast<double>(cells.size());
}

double halfplane_area_fraction(const ClusterShape& shape, const UnitEdge& edge) {
  return halfplane_area_fraction(std::span<const Cell>(shape.cells), edge);
}

} // namespace gridweave
