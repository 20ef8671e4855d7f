#include "gridweave/lap.hpp"

#include <cmath>
#include <limits>

#include "gridweave/model.hpp"

namespace gridweave {

std::vector<int> solve_lap_integer(std::span<const std::int64_t> cost, std::size_t n) {
  using Cost = std::int64_t;
  constexpr Cost kBig = std::numeric_limits<Cost>::max() / 4;
  if (cost.size() != n * n) throw Error("invalid_cost_matrix", "cost matrix is not n*n");
  if (n == 0) return {};
  const int dim = static_cast<int>(n);
  auto c = [&](int i, int j) { return cost[static_cast<std::size_t>(i) * n + j]; };

  std::vector<int> rowsol(n, -1), colsol(n, -1), free_rows(n), collist(n), matches(n, 0),
      pred(n);
  std::vector<Cost> v(n), d(n);

  // Column reduction, scanning columns in reverse.
  for (int j = dim - 1; j >= 0; --j) {
    Cost min = c(0, j);
    int imin = 0;
    for (int i = 1; i < dim; ++i) {
      if (c(i, j) < min) {
        min = c(i, j);
        imin = i;
      }
    }
    v[j] = min;
    if (++matches[imin] == 1) {
      rowsol[imin] = j;
      colsol[j] = imin;
    } else if (v[j] < v[rowsol[imin]]) {
      const int j1 = rowsol[imin];
      rowsol[imin] = j;
      colsol[j] = imin;
      colsol[j1] = -1;
    } else {
      colsol[j] = -1;
    }
  }

  // Reduction transfer.
  int numfree = 0;
  for (int i = 0; i < dim; ++i) {
    if (matches[i] == 0) {
      free_rows[numfree++] = i;
    } else if (matches[i] == 1) {
      const int j1 = rowsol[i];
      Cost min = kBig;
      for (int j = 0; j < dim; ++j)
        if (j != j1 && c(i, j) - v[j] < min) min = c(i, j) - v[j];
      v[j1] -= min;
    }
  }

  // Augmenting row reduction. On dense near-tied costs two rows can bid a
  // column down in tiny steps for a long time, so immediate re-bids are capped;
  // rows displaced past the cap are left for the augmentation phase.
  std::size_t rebid_budget = n;
  for (int loop = 0; loop < 2; ++loop) {
    int k = 0;
    const int prvnumfree = numfree;
    numfree = 0;
    while (k < prvnumfree) {
      const int i = free_rows[k++];
      Cost umin = c(i, 0) - v[0];
      int j1 = 0, j2 = 0;
      Cost usubmin = kBig;
      for (int j = 1; j < dim; ++j) {
        const Cost h = c(i, j) - v[j];
        if (h < usubmin) {
          if (h >= umin) {
            usubmin = h;
            j2 = j;
          } else {
            usubmin = umin;
            umin = h;
            j2 = j1;
            j1 = j;
          }
        }
      }
      int i0 = colsol[j1];
      if (umin < usubmin) {
        v[j1] -= usubmin - umin;
      } else if (i0 > -1) {
        j1 = j2;
        i0 = colsol[j2];
      }
      rowsol[i] = j1;
      colsol[j1] = i;
      if (i0 > -1) {
        if (umin < usubmin && rebid_budget > 0) {
          --rebid_budget;
          free_rows[--k] = i0;
        } else {
          free_rows[numfree++] = i0;
        }
      }
    }
  }

  // Shortest augmenting path for each remaining free row.
  for (int f = 0; f < numfree; ++f) {
    const int freerow = free_rows[f];
    for (int j = 0; j < dim; ++j) {
      d[j] = c(freerow, j) - v[j];
      pred[j] = freerow;
      collist[j] = j;
    }
    int low = 0, up = 0, last = 0, endofpath = -1;
    Cost min = 0;
    bool found = false;
    do {
      if (up == low) {
        last = low - 1;
        min = d[collist[up++]];
        for (int k = up; k < dim; ++k) {
          const int j = collist[k];
          const Cost h = d[j];
          if (h <= min) {
            if (h < min) {
              up = low;
              min = h;
            }
            collist[k] = collist[up];
            collist[up++] = j;
          }
        }
        for (int k = low; k < up; ++k) {
          if (colsol[collist[k]] < 0) {
            endofpath = collist[k];
            found = true;
            break;
          }
        }
      }
      if (!found) {
        const int j1 = collist[low++];
        const int i = colsol[j1];
        const Cost h = c(i, j1) - v[j1] - min;
        for (int k = up; k < dim; ++k) {
          const int j = collist[k];
          const Cost v2 = c(i, j) - v[j] - h;
          if (v2 < d[j]) {
            pred[j] = i;
            if (v2 == min) {
              if (colsol[j] < 0) {
                endofpath = j;
                found = true;
                break;
              }
              collist[k] = collist[up];
              collist[up++] = j;
            }
            d[j] = v2;
          }
        }
      }
    } while (!found);

    for (int k = 0; k <= last; ++k) {
      const int j1 = collist[k];
      v[j1] += d[j1] - min;
    }
    int i = -1;
    do {
      i = pred[endofpath];
      colsol[endofpath] = i;
      const int j1 = endofpath;
      endofpath = rowsol[i];
      rowsol[i] = j1;
    } while (i != freerow);
  }
  return rowsol;
}

LapSolution solve_lap(const CostMatrix& cost) {
  if (cost.rows != cost.cols || cost.values.size() != cost.rows * cost.cols)
    throw Error("invalid_cost_matrix", "cost matrix must be square");
  const std::size_t n = cost.rows;
  // Saturate so that no path sum can overflow.
  const double ceiling = n == 0 ? 0.0 : std::ldexp(1.0, 60) / static_cast<double>(n * 4);
  std::vector<std::int64_t> scaled(cost.values.size());
  for (std::size_t k = 0; k < cost.values.size(); ++k) {
    const double x = cost.values[k];
    if (!std::isfinite(x) || x < 0.0)
      throw Error("invalid_cost_matrix", "cost entries must be finite and non-negative");
    scaled[k] = static_cast<std::int64_t>(std::llround(std::min(x * kLapCostScale, ceiling)));
  }
  LapSolution out;
  out.col_of_row = solve_lap_integer(scaled, n);
  out.row_of_col.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    out.row_of_col[out.col_of_row[i]] = static_cast<int>(i);
    out.total_cost += cost.at(i, out.col_of_row[i]);
  }
  return out;
}

} // namespace gridweave
