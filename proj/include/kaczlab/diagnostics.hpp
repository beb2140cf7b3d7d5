#pragma once

#include <cstddef>
#include <utility>

#include "kaczlab/matrix.hpp"

namespace kaczlab {

struct RunReport;

/// Convergence-rate constants of the augmented greedy methods.
struct BoundReport {
  double lambda_min = 0.0;  ///< smallest nonzero eigenvalue of A^H A
  double eta = 0.0;         ///< min{1, (sqrt(lambda_min + 1/4) - 1/2)^2}
  double gamma = 0.0;       ///< 2||A||_F^2 + m - min{1 + min_i ||A^(i)||^2, min_j ||A_(j)||^2}
  double beta = 0.0;        ///< GRAK rate
  double zeta = 0.0;        ///< first-step rate 1 - eta / (2||A||_F^2 + m)
  double beta_tilde = 0.0;  ///< AGRAK rate 1 - eta / gamma
  double alpha = 0.0;       ///< 1 - lambda_min / ||A||_F^2
  double delta = 0.0;       ///< 1 - lambda_min / (||A||_F^2 - min_j ||A_(j)||^2)
  std::pair<double, double> theta_bracket;  ///< (delta, alpha)
};

/// Matrices whose smaller dimension exceeds this are refused by the oracle.
inline constexpr std::size_t default_eigen_limit = 2000;

/// Smallest nonzero eigenvalue of A^H A from a dense symmetric eigensolve
/// of the smaller Gram matrix. Eigenvalues below 1e-10 ||A||_F^2 count as
/// zero. Throws OracleUnavailable when min(m, n) > max_dim.
double lambda_min_nonzero(const RowColMatrix& a, std::size_t max_dim = default_eigen_limit);

BoundReport compute_bounds(const RowColMatrix& a, double lambda_min);
/// Runs the eigen oracle first.
BoundReport compute_bounds(const RowColMatrix& a);

/// CPU time of a over CPU time of b. Throws IncompleteRun unless both runs
/// finished (rule fired or converged) with positive wall time.
double speedup(const RunReport& a, const RunReport& b);

}  // namespace kaczlab
