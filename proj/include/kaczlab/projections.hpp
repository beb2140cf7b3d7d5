#pragma once

// Elementary Kaczmarz projections. Indices are 0-based and range checked;
// the in-place variants mutate caller-owned vectors.

#include <cstddef>
#include <span>

#include "kaczlab/matrix.hpp"

namespace kaczlab {

/// x + ((rhs_i - A^(i) x) / ||A^(i)||^2) (A^(i))^H
Vector kaczmarz_row_project(std::span<const double> x, std::size_t i, double rhs_i, const RowColMatrix& a);
/// In-place form; returns the applied step (rhs_i - A^(i) x) / ||A^(i)||^2.
double kaczmarz_row_project_inplace(std::span<double> x, std::size_t i, double rhs_i, const RowColMatrix& a);

/// Projection onto augmented row i <= m:
/// d = (b_i - z_i - A^(i) x) / (1 + ||A^(i)||^2); z_i += d; x += d (A^(i))^H.
/// Returns d.
double augmented_row_update(std::span<double> z, std::span<double> x, std::size_t i,
                            std::span<const double> b, const RowColMatrix& a);

/// z - (A_(j)^H z / ||A_(j)||^2) A_(j), in place; returns the coefficient.
double column_z_update(std::span<double> z, std::size_t j, const RowColMatrix& a);

}  // namespace kaczlab
