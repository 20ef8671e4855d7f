#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridweave/model.hpp"

namespace gridweave {

/// Dense row-major cost matrix; rows are samples, columns are cells.
struct CostMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  CostMatrix() = default;
  CostMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

struct LapSolution {
  std::vector<int> col_of_row;
  std::vector<int> row_of_col;
  double total_cost = 0.0; // in the units of the input matrix
};

/// Scale applied before solving on integers; costs are rounded to multiples
/// of 2^-20 so optima do not depend on floating-point noise.
inline constexpr double kLapCostScale = 1048576.0;

/// Minimum-cost perfect matching (Jonker-Volgenant: column reduction,
/// reduction transfer, two rounds of augmenting row reduction, then shortest
/// augmenting paths). Ties are broken by index order, so the result is a
/// deterministic function of the matrix. Throws Error("invalid_cost_matrix")
/// for non-square input or non-finite / negative entries.
LapSolution solve_lap(const CostMatrix& cost);

/// Integer core used by solve_lap. `cost` is n*n row-major.
std::vector<int> solve_lap_integer(std::span<const std::int64_t> cost, std::size_t n);

} // namespace gridweave
