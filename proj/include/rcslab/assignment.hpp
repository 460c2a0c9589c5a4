#pragma once

#include <cstddef>
#include <vector>

namespace rcs {

/// Dense row-major n x n cost matrix.
class CostMatrix {
 public:
  explicit CostMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

struct Assignment {
  std::vector<std::size_t> row_to_col;  // a permutation of 0..n-1
  double total_cost = 0.0;              // sum_r cost(r, row_to_col[r]), summed in row order
};

/// Minimum-cost perfect matching (Hungarian method with potentials, O(n^3)).
Assignment solve_assignment(const CostMatrix& cost);

/// Cost of a given permutation, summed in row order.
double assignment_cost(const CostMatrix& cost, const std::vector<std::size_t>& row_to_col);

}  // namespace rcs
