#pragma once

#include <cstddef>
#include <vector>

#include "kaczlab/matrix.hpp"

namespace kaczlab {

/// Thresholds, index sets and projected residuals of one greedy augmented
/// Kaczmarz iteration. Index sets hold 0-based indices in increasing order.
struct GreedySelection {
  double eps = 0.0;      ///< max(eps_row, eps_col)
  double eps_row = 0.0;
  double eps_col = 0.0;
  double total = 0.0;    ///< ||b - z - A x||^2 + ||A^H z||^2
  std::vector<std::size_t> omega_row;
  std::vector<std::size_t> omega_col;
  Vector r_tilde;        ///< b - z - A x restricted to omega_row, length m
  Vector s_tilde;        ///< -A^H z restricted to omega_col, length n
  Vector residual_row;   ///< b - z - A x
  Vector residual_col;   ///< A^H z
};

}  // namespace kaczlab
