#include "gridweave/local_adjust.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gridweave/geometry.hpp"
#include "scoring.hpp"

namespace gridweave {

namespace {

bool has_foreign_neighbor(const GridLayout& layout, CellIndex i) {
  const ClusterId own = layout.labels[i];
  if (own == kEmptyCluster) return false;
  const Cell c = layout.spec.cell(i);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const Cell n{c.col + dc, c.row + dr};
      if (!layout.spec.contains(n)) continue;
      const ClusterId other = layout.labels[layout.spec.index(n)];
      if (other != kEmptyCluster && other != own) return true;
    }
  }
  return false;
}

/// Mutable layout plus per-cluster caches used by the swap search.
class SwapEngine {
public:
  SwapEngine(const GridLayout& layout, ConvexityMeasure m, const GridLayout& reference)
      : layout_(layout), measure_(m), kernel_(layout.spec.width, layout.spec.height),
        removal_(layout.spec.capacity()), removal_valid_(layout.spec.capacity(), 0) {
    require_valid(layout);
    require_compatible(layout, reference);
    const auto& spec = layout.spec;
    reference_pos_.reserve(reference.sample_count());
    for (std::size_t s = 0; s < reference.sample_count(); ++s)
      reference_pos_.push_back(reference.position_of(static_cast<SampleIndex>(s)));

    const auto ids = layout.cluster_ids();
    dense_.assign(ids.empty() ? 0 : ids.back() + 1, -1);
    for (std::size_t k = 0; k < ids.size(); ++k) dense_[ids[k]] = static_cast<int>(k);
    cells_.resize(ids.size());
    masks_.assign(ids.size(), CellMask(0, 0, spec.width, spec.height));
    for (CellIndex i = 0; i < spec.capacity(); ++i) {
      const ClusterId c = layout.labels[i];
      if (c == kEmptyCluster) continue;
      cells_[dense_[c]].push_back(spec.cell(i));
      masks_[dense_[c]].set(spec.cell(i));
    }
    scores_.resize(ids.size());
    triples_.resize(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (measure_ == ConvexityMeasure::Triple) {
        triples_[k] = collinear_triple_counts(cells_[k]);
        scores_[k] = detail::triple_ratio(triples_[k]);
      } else {
        scores_[k] = detail::shape_score(cells_[k], measure_, masks_[k]);
      }
    }
    if (measure_ == ConvexityMeasure::Perimeter) {
      bits_.assign(ids.size(), detail::BitRows(spec.width, spec.height));
      for (std::size_t k = 0; k < ids.size(); ++k)
        for (const Cell& c : cells_[k]) bits_[k].set(c.col, c.row);
      boundary_len_.resize(ids.size());
      connected_.resize(ids.size());
      for (std::size_t k = 0; k < ids.size(); ++k) refresh_perimeter_state(static_cast<int>(k));
    }
    boundary_.resize(spec.capacity());
    for (CellIndex i = 0; i < spec.capacity(); ++i) boundary_[i] = has_foreign_neighbor(layout_, i);
  }

  const GridLayout& layout() const { return layout_; }
  bool is_boundary(CellIndex i) const { return boundary_[i] != 0; }
  int cluster_count() const { return static_cast<int>(cells_.size()); }

  double score() const {
    if (scores_.empty()) return 1.0;
    double sum = 0.0;
    for (double s : scores_) sum += s;
    return sum / static_cast<double>(scores_.size());
  }

  std::vector<CellIndex> boundary_list() const {
    std::vector<CellIndex> out;
    for (CellIndex i = 0; i < layout_.spec.capacity(); ++i)
      if (boundary_[i]) out.push_back(i);
    return out;
  }

  SwapEvaluation evaluate(CellIndex a, CellIndex b) {
    const Rescored r = rescore(a, b);
    const int ka = dense_[layout_.labels[a]];
    const int kb = dense_[layout_.labels[b]];
    SwapEvaluation out;
    out.gain = (r.score_a + r.score_b - scores_[ka] - scores_[kb]) /
               static_cast<double>(scores_.size());
    out.prox_penalty = prox_penalty(a, b);
    return out;
  }

  void apply(CellIndex a, CellIndex b) {
    const Rescored r = rescore(a, b);
    const int ka = dense_[layout_.labels[a]];
    const int kb = dense_[layout_.labels[b]];
    const Cell ca = layout_.spec.cell(a), cb = layout_.spec.cell(b);

    auto& asg = layout_.assignment;
    const SampleIndex sa = asg.sample_of[a], sb = asg.sample_of[b];
    std::swap(asg.sample_of[a], asg.sample_of[b]);
    asg.cell_of[sa] = b;
    asg.cell_of[sb] = a;
    std::swap(layout_.labels[a], layout_.labels[b]);

    *std::find(cells_[ka].begin(), cells_[ka].end(), ca) = cb;
    *std::find(cells_[kb].begin(), cells_[kb].end(), cb) = ca;
    masks_[ka].set(ca, false);
    masks_[ka].set(cb, true);
    masks_[kb].set(cb, false);
    masks_[kb].set(ca, true);
    scores_[ka] = r.score_a;
    scores_[kb] = r.score_b;
    triples_[ka] = r.triple_a;
    triples_[kb] = r.triple_b;
    for (int k : {ka, kb})
      for (const Cell& c : cells_[k]) removal_valid_[layout_.spec.index(c)] = 0;
    if (measure_ == ConvexityMeasure::Perimeter) {
      bits_[ka].set(ca.col, ca.row, false);
      bits_[ka].set(cb.col, cb.row, true);
      bits_[kb].set(cb.col, cb.row, false);
      bits_[kb].set(ca.col, ca.row, true);
      refresh_perimeter_state(ka);
      refresh_perimeter_state(kb);
    }

    for (CellIndex center : {a, b}) {
      const Cell c = layout_.spec.cell(center);
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          const Cell n{c.col + dc, c.row + dr};
          if (layout_.spec.contains(n)) {
            const CellIndex ni = layout_.spec.index(n);
            boundary_[ni] = has_foreign_neighbor(layout_, ni);
          }
        }
    }
  }

private:
  struct Rescored {
    double score_a = 0.0, score_b = 0.0;
    TripleCounts triple_a, triple_b;
  };

  // Scores of the clusters of `a` and `b` after exchanging the two cells.
  Rescored rescore(CellIndex a, CellIndex b) {
    const int ka = dense_[layout_.labels[a]];
    const int kb = dense_[layout_.labels[b]];
    const Cell ca = layout_.spec.cell(a), cb = layout_.spec.cell(b);
    Rescored out;
    if (measure_ == ConvexityMeasure::Triple) {
      out.triple_a = exchanged_triples(ka, ca, cb);
      out.triple_b = exchanged_triples(kb, cb, ca);
      out.score_a = detail::triple_ratio(out.triple_a);
      out.score_b = detail::triple_ratio(out.triple_b);
      return out;
    }
    if (measure_ == ConvexityMeasure::Perimeter) {
      out.score_a = exchanged_perimeter(ka, ca, cb);
      out.score_b = exchanged_perimeter(kb, cb, ca);
      return out;
    }
    out.score_a = exchanged_score(ka, ca, cb);
    out.score_b = exchanged_score(kb, cb, ca);
    return out;
  }

  // Triple counts of cluster k with `leaving` replaced by `joining`.
  TripleCounts exchanged_triples(int k, Cell leaving, Cell joining) {
    const CellIndex li = layout_.spec.index(leaving);
    if (!removal_valid_[li]) {
      removal_[li] = kernel_.insertion(cells_[k], leaving, &leaving);
      removal_valid_[li] = 1;
    }
    TripleCounts t = triples_[k];
    t -= removal_[li];
    t += kernel_.insertion(cells_[k], joining, &leaving);
    return t;
  }

  double exchanged_score(int k, Cell leaving, Cell joining) {
    scratch_ = cells_[k];
    *std::find(scratch_.begin(), scratch_.end(), leaving) = joining;
    CellMask& mask = masks_[k];
    mask.set(leaving, false);
    mask.set(joining, true);
    const double s = detail::shape_score(scratch_, measure_, mask);
    mask.set(joining, false);
    mask.set(leaving, true);
    return s;
  }

  void refresh_perimeter_state(int k) {
    boundary_len_[k] = detail::boundary_length(cells_[k], masks_[k]);
    linker_.link_length(bits_[k]);
    connected_[k] = linker_.components() == 1;
  }

  // True when the 4-neighbors of `c` inside `mask` are joined through its
  // 8-neighborhood, so taking `c` out cannot split its component.
  static bool locally_removable(const CellMask& mask, Cell c) {
    static constexpr int kRing[8][2] = {{0, -1}, {1, -1}, {1, 0},  {1, 1},
                                        {0, 1},  {-1, 1}, {-1, 0}, {-1, -1}};
    bool in[8];
    for (int i = 0; i < 8; ++i) in[i] = mask.test({c.col + kRing[i][0], c.row + kRing[i][1]});
    int start = 0;
    while (start < 8 && in[start]) ++start;
    if (start == 8) return true;
    int runs = 0;
    bool touches = false;
    for (int step = 1; step <= 8; ++step) {
      const int i = (start + step) % 8;
      if (in[i]) {
        touches = touches || i % 2 == 0;
      } else {
        if (touches) ++runs;
        touches = false;
      }
    }
    return runs <= 1;
  }

  // Perimeter ratio of cluster k with `leaving` replaced by `joining`.
  double exchanged_perimeter(int k, Cell leaving, Cell joining) {
    CellMask& mask = masks_[k];
    auto inside = [&](Cell c) {
      return static_cast<int>(mask.test({c.col - 1, c.row})) + mask.test({c.col + 1, c.row}) +
             mask.test({c.col, c.row - 1}) + mask.test({c.col, c.row + 1});
    };
    detail::BitRows& bits = bits_[k];
    mask.set(leaving, false);
    bits.set(leaving.col, leaving.row, false);
    const int kl = inside(leaving), kj = inside(joining);
    const bool connected = connected_[k] && kj > 0 && locally_removable(mask, leaving);
    const double boundary = static_cast<double>(boundary_len_[k] + 2 * kl - 2 * kj);
    mask.set(joining, true);
    bits.set(joining.col, joining.row, true);

    // Corner points ordered by (y, x); per y only the two extremes matter.
    points_.clear();
    std::pair<int, int> above{-1, -1};
    for (int y = 0; y <= layout_.spec.height; ++y) {
      const std::pair<int, int> below =
          y < layout_.spec.height ? bits.extent(y) : std::pair<int, int>{-1, -1};
      int lo = -1, hi = -1;
      for (const auto& [first, last] : {above, below}) {
        if (first < 0) continue;
        lo = lo < 0 ? first : std::min(lo, first);
        hi = std::max(hi, last + 1);
      }
      if (lo >= 0) {
        points_.push_back({y, lo});
        points_.push_back({y, hi});
      }
      above = below;
    }
    const double link = connected ? 0.0 : linker_.link_length(bits);
    mask.set(joining, false);
    mask.set(leaving, true);
    bits.set(joining.col, joining.row, false);
    bits.set(leaving.col, leaving.row, true);
    return hull_perimeter() / (boundary + 2.0 * link);
  }

  // Monotone chain over points_, which are distinct and sorted.
  double hull_perimeter() {
    hull_.resize(2 * points_.size());
    std::size_t k = 0;
    auto turn = [](const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
      return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    for (const auto& p : points_) {
      while (k >= 2 && turn(hull_[k - 2], hull_[k - 1], p) <= 0) --k;
      hull_[k++] = p;
    }
    for (std::size_t i = points_.size() - 1, lower = k + 1; i-- > 0;) {
      while (k >= lower && turn(hull_[k - 2], hull_[k - 1], points_[i]) <= 0) --k;
      hull_[k++] = points_[i];
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i)
      sum += std::hypot(static_cast<double>(hull_[i + 1].x - hull_[i].x),
                        static_cast<double>(hull_[i + 1].y - hull_[i].y));
    return sum;
  }

  double prox_penalty(CellIndex a, CellIndex b) const {
    const SampleIndex sa = layout_.assignment.sample_of[a];
    const SampleIndex sb = layout_.assignment.sample_of[b];
    const Point va = layout_.spec.center(a), vb = layout_.spec.center(b);
    const Point ra = reference_pos_[sa], rb = reference_pos_[sb];
    return squared_distance(vb, ra) + squared_distance(va, rb) - squared_distance(va, ra) -
           squared_distance(vb, rb);
  }

  GridLayout layout_;
  ConvexityMeasure measure_;
  std::vector<Point> reference_pos_;
  std::vector<int> dense_; // cluster id -> cache slot
  std::vector<std::vector<Cell>> cells_;
  std::vector<CellMask> masks_;
  std::vector<double> scores_;
  std::vector<TripleCounts> triples_;
  std::vector<std::uint8_t> boundary_;
  std::vector<Cell> scratch_;
  detail::TripleKernel kernel_;
  std::vector<TripleCounts> removal_; // per cell: counts lost when it leaves
  std::vector<std::uint8_t> removal_valid_;
  std::vector<detail::BitRows> bits_; // perimeter measure only
  std::vector<std::int64_t> boundary_len_;
  std::vector<std::uint8_t> connected_;
  std::vector<LatticePoint> points_, hull_;
  detail::ComponentLinker linker_;
};

void check_swap(const GridLayout& layout, CellIndex a, CellIndex b) {
  const auto cap = layout.spec.capacity();
  if (a < 0 || b < 0 || a >= cap || b >= cap) throw Error("invalid_swap", "cell out of range");
  const ClusterId la = layout.labels[a], lb = layout.labels[b];
  if (la == kEmptyCluster || lb == kEmptyCluster)
    throw Error("invalid_swap", "swaps never involve empty cells");
  if (la == lb) throw Error("invalid_swap", "cells belong to the same cluster");
  if (!has_foreign_neighbor(layout, a) || !has_foreign_neighbor(layout, b))
    throw Error("invalid_swap", "both cells must be boundary cells");
}

} // namespace

std::vector<CellIndex> boundary_cells(const GridLayout& layout) {
  std::vector<CellIndex> out;
  for (CellIndex i = 0; i < layout.spec.capacity(); ++i)
    if (has_foreign_neighbor(layout, i)) out.push_back(i);
  return out;
}

SwapEvaluation evaluate_swap(const GridLayout& layout, CellIndex a, CellIndex b,
                             ConvexityMeasure m, const GridLayout& reference) {
  require_valid(layout);
  check_swap(layout, a, b);
  SwapEngine engine(layout, m, reference);
  return engine.evaluate(a, b);
}

LocalResult local_adjust(const GridLayout& layout, ConvexityMeasure m, std::uint64_t seed,
                         const GridLayout& reference, const LocalOptions& options) {
  SwapEngine engine(layout, m, reference);
  LocalResult out;
  out.initial_score = engine.cluster_count() > 0 ? engine.score() : 1.0;
  double current = options.audit && engine.cluster_count() > 0 ? layout_convexity(layout, m)
                                                               : out.initial_score;
  std::mt19937_64 rng(seed);
  const CellIndex cap = layout.spec.capacity();

  for (int pass = 0; pass < options.max_passes; ++pass) {
    ++out.passes;
    std::vector<CellIndex> order = engine.boundary_list();
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng() % i]);

    int accepted = 0;
    for (CellIndex a : order) {
      if (!engine.is_boundary(a)) continue;
      const ClusterId la = engine.layout().labels[a];
      CellIndex best = -1;
      SwapEvaluation best_eval;
      for (CellIndex b = 0; b < cap; ++b) {
        if (!engine.is_boundary(b) || engine.layout().labels[b] == la) continue;
        const SwapEvaluation e = engine.evaluate(a, b);
        if (e.gain <= options.gain_threshold) continue;
        const bool better =
            best < 0 || e.gain > best_eval.gain + options.gain_threshold ||
            (e.gain >= best_eval.gain - options.gain_threshold &&
             e.prox_penalty < best_eval.prox_penalty);
        if (better) {
          best = b;
          best_eval = e;
        }
      }
      if (best < 0) continue;
      engine.apply(a, best);
      ++accepted;
      SwapRecord rec{a, best, best_eval.gain, current, 0.0};
      rec.after = options.audit ? layout_convexity(engine.layout(), m) : current + best_eval.gain;
      current = rec.after;
      out.log.push_back(rec);
    }
    out.swaps += accepted;
    if (accepted == 0) break;
  }
  out.final_score = engine.cluster_count() > 0 ? engine.score() : 1.0;
  out.layout = engine.layout();
  return out;
}

} // namespace gridweave
