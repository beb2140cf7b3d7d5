#include "kaczlab/diagnostics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kaczlab/error.hpp"
#include "kaczlab/report.hpp"

namespace kaczlab {

double lambda_min_nonzero(const RowColMatrix& a, std::size_t max_dim) {
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t d = std::min(m, n);
  if (d > max_dim)
    throw Error(ErrorCode::oracle_unavailable, "eigen oracle limited to min(m, n) <= " + std::to_string(max_dim) +
                                                   ", got " + std::to_string(d));

  // Nonzero spectra of A^H A and A A^H coincide; factor the smaller one.
  const auto dense = a.to_dense_row_major();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(
      dense.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  Eigen::MatrixXd gram = (n <= m) ? Eigen::MatrixXd(A.transpose() * A) : Eigen::MatrixXd(A * A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::oracle_unavailable, "eigensolver failed");

  const double floor = 1e-10 * a.frob_sq();
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double ev = es.eigenvalues()[k];
    if (ev > floor) return ev;
  }
  throw Error(ErrorCode::oracle_unavailable, "A has no nonzero singular values");
}

BoundReport compute_bounds(const RowColMatrix& a, double lambda_min) {
  if (!(lambda_min > 0.0) || !std::isfinite(lambda_min))
    throw Error(ErrorCode::invalid_argument, "lambda_min must be positive");
  const double F = a.frob_sq();
  const double m = static_cast<double>(a.rows());
  const auto rn = a.row_norms_sq();
  const auto cn = a.col_norms_sq();
  const double min_row = *std::min_element(rn.begin(), rn.end());
  const double min_col = *std::min_element(cn.begin(), cn.end());
  const double aug = 2.0 * F + m;

  BoundReport r;
  r.lambda_min = lambda_min;
  const double s = std::sqrt(lambda_min + 0.25) - 0.5;
  r.eta = std::min(1.0, s * s);
  r.gamma = aug - std::min(1.0 + min_row, min_col);
  r.beta = 1.0 - 0.5 * (aug / r.gamma + 1.0) * r.eta / aug;
  r.zeta = 1.0 - r.eta / aug;
  r.beta_tilde = 1.0 - r.eta / r.gamma;
  r.alpha = 1.0 - lambda_min / F;
  r.delta = 1.0 - lambda_min / (F - min_col);
  r.theta_bracket = {r.delta, r.alpha};
  return r;
}

BoundReport compute_bounds(const RowColMatrix& a) { return compute_bounds(a, lambda_min_nonzero(a)); }

double speedup(const RunReport& a, const RunReport& b) {
  for (const RunReport* r : {&a, &b}) {
    if (!r->completed())
      throw Error(ErrorCode::incomplete_run, "speed-up needs completed runs; " + r->engine + " ended with status " +
                                                 to_string(r->status));
    if (!(r->wall_seconds > 0.0)) throw Error(ErrorCode::incomplete_run, "run has no recorded wall time");
  }
  return a.wall_seconds / b.wall_seconds;
}

}  // namespace kaczlab
