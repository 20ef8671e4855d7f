#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gridweave/model.hpp"

namespace gridweave::testing {

/// Layout from rows of characters; '.' is an empty cell, any other character
/// is a cluster (ids in sorted character order). Samples follow cell order.
inline GridLayout layout_from_rows(const std::vector<std::string>& rows) {
  GridSpec spec{static_cast<int>(rows.at(0).size()), static_cast<int>(rows.size())};
  std::map<char, ClusterId> ids;
  for (const auto& r : rows)
    for (char ch : r)
      if (ch != '.') ids.emplace(ch, 0);
  ClusterId next = 0;
  for (auto& [ch, id] : ids) id = next++;
  std::vector<ClusterId> clusters;
  std::vector<CellIndex> cells;
  for (int row = 0; row < spec.height; ++row)
    for (int col = 0; col < spec.width; ++col) {
      const char ch = rows[row][col];
      if (ch == '.') continue;
      clusters.push_back(ids[ch]);
      cells.push_back(spec.index({col, row}));
    }
  return make_layout(spec, std::move(clusters), std::move(cells));
}

inline std::vector<Cell> cells_of(const std::vector<std::string>& rows, char ch) {
  std::vector<Cell> out;
  for (int row = 0; row < static_cast<int>(rows.size()); ++row)
    for (int col = 0; col < static_cast<int>(rows[row].size()); ++col)
      if (rows[row][col] == ch) out.push_back({col, row});
  return out;
}

/// Random cell subset of a w x h window with the given fill probability;
/// never empty.
inline std::vector<Cell> random_cells(std::mt19937_64& rng, int w, int h, double fill) {
  std::bernoulli_distribution take(fill);
  std::vector<Cell> out;
  for (int row = 0; row < h; ++row)
    for (int col = 0; col < w; ++col)
      if (take(rng)) out.push_back({col, row});
  if (out.empty()) out.push_back({static_cast<int>(rng() % w), static_cast<int>(rng() % h)});
  return out;
}

/// Random layout: n samples over k clusters placed on a random injective map.
inline GridLayout random_layout(std::mt19937_64& rng, GridSpec spec, int n, int k) {
  std::vector<CellIndex> perm(spec.capacity());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  perm.resize(n);
  std::vector<ClusterId> clusters(n);
  for (int i = 0; i < n; ++i) clusters[i] = static_cast<ClusterId>(i % k);
  return make_layout(spec, std::move(clusters), std::move(perm));
}

inline SampleSet samples_at(const std::vector<Point>& positions, const std::vector<ClusterId>& clusters,
                            int cluster_count) {
  SampleSet set;
  for (int k = 0; k < cluster_count; ++k) set.cluster_names.push_back("c" + std::to_string(k));
  for (std::size_t i = 0; i < positions.size(); ++i)
    set.samples.push_back({"s" + std::to_string(i), positions[i], clusters[i], {}});
  return set;
}

} // namespace gridweave::testing
