#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "kaczlab/matrix.hpp"

namespace kaczlab {

/// A (possibly inconsistent) system A x = b with optional references
/// x_star = A^+ b and z_star = b - A x_star.
struct LinearSystem {
  RowColMatrix mat;
  Vector b;
  std::optional<Vector> x_star;
  std::optional<Vector> z_star;
  std::string provenance;

  LinearSystem(RowColMatrix a, Vector rhs, std::string origin = {});

  std::size_t rows() const noexcept { return mat.rows(); }
  std::size_t cols() const noexcept { return mat.cols(); }
  bool has_reference() const noexcept { return x_star.has_value() && z_star.has_value(); }
};

/// i.i.d. standard normal entries, dense, filled row by row.
RowColMatrix gen_gaussian(std::size_t m, std::size_t n, std::uint64_t seed);

/// Sparse matrix with `per_row` distinct standard-normal entries per row at
/// uniformly chosen columns; any column left empty receives one entry in a
/// random row.
RowColMatrix gen_sparse(std::size_t m, std::size_t n, std::size_t per_row, std::uint64_t seed);

/// i.i.d. standard normal vector from the given stream.
Vector gen_gaussian_vector(std::size_t len, std::uint64_t seed, std::uint64_t stream_id);

struct ReferenceSolution {
  Vector x_star;
  Vector z_star;
  std::size_t iterations = 0;
  double normal_residual = 0.0;  ///< ||A^H (b - A x_star)||_2
};

inline constexpr double default_oracle_tol = 1e-12;

/// Least-norm least-squares solution by CGLS started at zero, so the iterate
/// stays in range(A^H). Converged when
/// ||A^H (b - A x)|| <= oracle_tol * ||A||_F * ||b||, checked on the true
/// residual. Throws OracleNotConverged after `max_iters` (0 picks a default).
ReferenceSolution reference_solution(const RowColMatrix& a, std::span<const double> b,
                                     double oracle_tol = default_oracle_tol, std::size_t max_iters = 0);

/// Fills x_star / z_star of `sys` from reference_solution.
void attach_reference(LinearSystem& sys, double oracle_tol = default_oracle_tol);

/// b = A x_seed + r with r in null(A^H), ||r|| = noise_scale * ||A x_seed||.
/// r comes from projecting a seeded Gaussian vector onto range(A)^perp.
/// Throws TrivialNullSpace when three independent draws project to zero.
Vector build_inconsistent_rhs(const RowColMatrix& a, std::span<const double> x_seed, std::uint64_t noise_seed,
                              double noise_scale);

/// b = A x_seed + r with r a scaled Gaussian vector, not orthogonalized.
Vector build_randn_rhs(const RowColMatrix& a, std::span<const double> x_seed, std::uint64_t noise_seed,
                       double noise_scale);

enum class RhsMode { nullspace, randn };

/// sum x_ref^2 / sum (x_ref - x_hat)^2; +infinity when x_hat == x_ref.
double snr(std::span<const double> x_ref, std::span<const double> x_hat);

/// Content hash of (A, b), used to key the on-disk oracle cache.
std::uint64_t content_hash(const RowColMatrix& a, std::span<const double> b);

}  // namespace kaczlab
