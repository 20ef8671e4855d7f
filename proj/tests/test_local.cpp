#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "gridweave/local_adjust.hpp"
#include "gridweave/measures.hpp"
#include "support.hpp"

using namespace gridweave;
using gridweave::testing::layout_from_rows;

namespace {

GridLayout swapped(const GridLayout& l, CellIndex a, CellIndex b) {
  std::vector<CellIndex> cell_of = l.assignment.cell_of;
  const SampleIndex sa = l.assignment.sample_of[a], sb = l.assignment.sample_of[b];
  cell_of[sa] = b;
  cell_of[sb] = a;
  return make_layout(l.spec, l.sample_clusters, cell_of);
}

std::vector<CellIndex> brute_boundary(const GridLayout& l) {
  std::vector<CellIndex> out;
  for (CellIndex i = 0; i < l.spec.capacity(); ++i) {
    if (l.labels[i] == kEmptyCluster) continue;
    const Cell c = l.spec.cell(i);
    bool foreign = false;
    for (int dc = -1; dc <= 1; ++dc)
      for (int dr = -1; dr <= 1; ++dr) {
        const Cell d{c.col + dc, c.row + dr};
        if (!l.spec.contains(d)) continue;
        const ClusterId o = l.labels[l.spec.index(d)];
        foreign = foreign || (o != kEmptyCluster && o != l.labels[i]);
      }
    if (foreign) out.push_back(i);
  }
  return out;
}

std::vector<std::pair<CellIndex, CellIndex>> legal_swaps(const GridLayout& l) {
  const auto b = brute_boundary(l);
  std::vector<std::pair<CellIndex, CellIndex>> out;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j)
      if (l.labels[b[i]] != l.labels[b[j]]) out.emplace_back(b[i], b[j]);
  return out;
}

bool is_legal(const GridLayout& l, CellIndex a, CellIndex b) {
  const auto bd = brute_boundary(l);
  return l.labels[a] != l.labels[b] && std::binary_search(bd.begin(), bd.end(), a) &&
         std::binary_search(bd.begin(), bd.end(), b);
}

std::map<ClusterId, int> cluster_sizes(const GridLayout& l) {
  std::map<ClusterId, int> n;
  for (ClusterId c : l.labels)
    if (c != kEmptyCluster) ++n[c];
  return n;
}

// A with a notch at (2,1) and a protrusion at (2,2); one swap makes both halves solid.
// Cluster A is a 4x2 rectangle plus one cell protruding into B.
const std::vector<std::string> kProtrusion{"AAAA", "AAAA", "BABB", "BBBB"};

} // namespace

TEST_CASE("boundary cells use the 8-neighborhood and skip empty cells") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const GridLayout l = gridweave::testing::random_layout(rng, {7, 6}, 30, 3);
    CHECK(boundary_cells(l) == brute_boundary(l));
  }
  CHECK(boundary_cells(layout_from_rows({"A.B"})).empty());
  CHECK(boundary_cells(layout_from_rows({"A.", ".B"})).size() == 2);
}

TEST_CASE("evaluate_swap gains equal full recomputation") {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 12; ++trial) {
    const GridLayout l = gridweave::testing::random_layout(rng, {6, 5}, 26, 3);
    const GridLayout ref = gridweave::testing::random_layout(rng, {6, 5}, 26, 3);
    const GridLayout reference = make_layout(l.spec, l.sample_clusters, ref.assignment.cell_of);
    for (const auto m : kAllMeasures) {
      const double base = layout_convexity(l, m);
      const double base_prox = proximity_raw(l, reference);
      for (const auto& [a, b] : legal_swaps(l)) {
        const SwapEvaluation e = evaluate_swap(l, a, b, m, reference);
        const GridLayout after = swapped(l, a, b);
        CHECK(e.gain == doctest::Approx(layout_convexity(after, m) - base).epsilon(1e-12));
        CHECK(e.prox_penalty == doctest::Approx(proximity_raw(after, reference) - base_prox).epsilon(1e-12));
        if (b % 7 == 0 && is_legal(after, a, b)) {
          const SwapEvaluation back = evaluate_swap(after, a, b, m, reference);
          CHECK(e.gain + back.gain == doctest::Approx(0.0).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("evaluate_swap preconditions") {
  const GridLayout l = layout_from_rows({"AAB.", "AABB", "AABB"});
  CHECK_THROWS_AS(evaluate_swap(l, 0, 1, ConvexityMeasure::Area, l), Error);  // same cluster
  CHECK_THROWS_AS(evaluate_swap(l, 2, 3, ConvexityMeasure::Area, l), Error);  // empty cell
  CHECK_THROWS_AS(evaluate_swap(l, 4, 2, ConvexityMeasure::Area, l), Error);  // (0,1) is interior
  CHECK_THROWS_AS(evaluate_swap(l, 1, 99, ConvexityMeasure::Area, l), Error); // out of range
  CHECK_NOTHROW(evaluate_swap(l, 1, 2, ConvexityMeasure::Area, l));
}

TEST_CASE("protrusion fixture: swap gains match full recomputation") {
  const GridLayout l = layout_from_rows(kProtrusion);
  const CellIndex bump = l.spec.index({1, 2}), beside = l.spec.index({0, 2});
  for (const auto m : kAllMeasures) {
    const SwapEvaluation e = evaluate_swap(l, bump, beside, m, l);
    CHECK(e.gain == doctest::Approx(layout_convexity(swapped(l, bump, beside), m) - layout_convexity(l, m)).epsilon(1e-12));
    CHECK(e.prox_penalty == 2.0);
  }
  CHECK(evaluate_swap(l, bump, beside, ConvexityMeasure::Triple, l).gain ==
        doctest::Approx(1.0 - layout_convexity(l, ConvexityMeasure::Triple)).epsilon(1e-12));
}

TEST_CASE("protrusion fixture: the triple phase fixes it with one swap") {
  const GridLayout l = layout_from_rows(kProtrusion);
  REQUIRE(layout_convexity(l, ConvexityMeasure::Triple) < 1.0);
  // Exhaustive oracle: every single swap that reaches the optimum.
  std::set<std::vector<ClusterId>> optima;
  for (const auto& [a, b] : legal_swaps(l)) {
    const GridLayout one = swapped(l, a, b);
    if (layout_convexity(one, ConvexityMeasure::Triple) == 1.0) optima.insert(one.labels);
  }
  REQUIRE_FALSE(optima.empty());
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    const LocalResult r = local_adjust(l, ConvexityMeasure::Triple, seed, l);
    CHECK(r.swaps == 1);
    CHECK(r.final_score == 1.0);
    CHECK(layout_convexity(r.layout, ConvexityMeasure::Triple) == 1.0);
    CHECK(optima.count(r.layout.labels) == 1);
    CHECK(local_adjust(l, ConvexityMeasure::Triple, seed, l).layout == r.layout);
  }
}

TEST_CASE("rectangular clusters are left alone") {
  const GridLayout l = layout_from_rows({"AABBB", "AABBB", "CCCCC"});
  for (const auto m : kAllMeasures) {
    const LocalResult r = local_adjust(l, m, 3, l);
    CHECK(r.swaps == 0);
    CHECK(r.passes == 1);
    CHECK(r.layout == l);
  }
}

TEST_CASE("accepted swaps strictly increase the recomputed score") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 6; ++trial) {
    const GridLayout l = gridweave::testing::random_layout(rng, {8, 7}, 50, 3);
    for (const auto m : kAllMeasures) {
      LocalOptions opt;
      opt.audit = true;
      const LocalResult r = local_adjust(l, m, trial, l, opt);
      double prev = layout_convexity(l, m);
      CHECK(r.initial_score == doctest::Approx(prev).epsilon(1e-12));
      for (const auto& rec : r.log) {
        CHECK(rec.before == doctest::Approx(prev).epsilon(1e-12));
        CHECK(rec.after > rec.before);
        CHECK(rec.after - rec.before == doctest::Approx(rec.gain).epsilon(1e-9));
        CHECK(l.labels[rec.a] != kEmptyCluster);
        CHECK(l.labels[rec.b] != kEmptyCluster);
        prev = rec.after;
      }
      CHECK(r.final_score == doctest::Approx(layout_convexity(r.layout, m)).epsilon(1e-12));
      CHECK(r.final_score >= r.initial_score);
      CHECK(static_cast<int>(r.log.size()) == r.swaps);
      CHECK(r.passes <= 10);
      CHECK(validate_layout(r.layout).ok());
      CHECK(cluster_sizes(r.layout) == cluster_sizes(l));
      for (CellIndex i = 0; i < l.spec.capacity(); ++i)
        CHECK((l.labels[i] == kEmptyCluster) == (r.layout.labels[i] == kEmptyCluster));
    }
  }
}

TEST_CASE("the local phase is deterministic for a fixed seed") {
  std::mt19937_64 rng(64);
  const GridLayout l = gridweave::testing::random_layout(rng, {9, 9}, 81, 4);
  for (const auto m : {ConvexityMeasure::Triple, ConvexityMeasure::Perimeter}) {
    const LocalResult a = local_adjust(l, m, 17, l), b = local_adjust(l, m, 17, l);
    CHECK(a.layout == b.layout);
    CHECK(a.swaps == b.swaps);
    REQUIRE(a.log.size() == b.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i) {
      CHECK(a.log[i].a == b.log[i].a);
      CHECK(a.log[i].b == b.log[i].b);
      CHECK(a.log[i].gain == b.log[i].gain);
    }
  }
}

TEST_CASE("a pass ends at a local optimum when it accepts nothing") {
  std::mt19937_64 rng(65);
  const GridLayout l = gridweave::testing::random_layout(rng, {6, 6}, 36, 2);
  LocalOptions opt;
  opt.max_passes = 50;
  const LocalResult r = local_adjust(l, ConvexityMeasure::Area, 5, l, opt);
  REQUIRE(r.passes < 50);
  for (const auto& [a, b] : legal_swaps(r.layout))
    CHECK(evaluate_swap(r.layout, a, b, ConvexityMeasure::Area, l).gain <= 1e-12);
}
