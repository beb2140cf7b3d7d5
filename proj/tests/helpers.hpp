#pragma once

// Shared test oracles. Everything here is built on Eigen and std::mt19937,
// never on the library's own RNG or kernels.

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "kaczlab/matrix.hpp"
#include "kaczlab/problems.hpp"

namespace testing {

using kaczlab::RowColMatrix;
using kaczlab::Vector;

inline Eigen::MatrixXd to_eigen(const RowColMatrix& a) {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a.at(i, j);
  return out;
}

inline Eigen::VectorXd to_eigen(const Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Vector from_eigen(const Eigen::VectorXd& v) { return Vector(v.data(), v.data() + v.size()); }

inline RowColMatrix from_eigen(const Eigen::MatrixXd& m) {
  std::vector<double> rm(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) rm[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
  return RowColMatrix::from_dense(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), rm);
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& g, int m, int n) {
  std::normal_distribution<double> d;
  Eigen::MatrixXd a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = d(g);
  return a;
}

inline Vector random_vector(std::mt19937_64& g, std::size_t len, double scale = 1.0) {
  std::normal_distribution<double> d;
  Vector v(len);
  for (auto& e : v) e = scale * d(g);
  return v;
}

/// x_star = A^+ b by complete orthogonal decomposition.
inline Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  return a.completeOrthogonalDecomposition().solve(b);
}

inline double rel_err(const Vector& a, const Vector& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

/// Inconsistent system with an Eigen-built null-space component and oracle
/// references attached from the pseudo-inverse.
inline kaczlab::LinearSystem random_inconsistent(std::mt19937_64& g, int m, int n, double noise = 0.5) {
  const Eigen::MatrixXd a = random_matrix(g, m, n);
  const Eigen::VectorXd xs = to_eigen(random_vector(g, static_cast<std::size_t>(n)));
  const Eigen::VectorXd ax = a * xs;
  Eigen::VectorXd w = to_eigen(random_vector(g, static_cast<std::size_t>(m)));
  w -= a * pinv_solve(a, w);
  const Eigen::VectorXd b = ax + noise * ax.norm() / w.norm() * w;
  kaczlab::LinearSystem sys(from_eigen(a), from_eigen(b), "test");
  const Eigen::VectorXd x_star = pinv_solve(a, b);
  sys.x_star = from_eigen(x_star);
  sys.z_star = from_eigen(Eigen::VectorXd(b - a * x_star));
  return sys;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

struct BruteSelection {
  std::vector<std::size_t> omega_row, omega_col;
  Eigen::VectorXd r, c;
  double eps = 0.0;
};

/// Greedy index sets straight from their definitions, on Eigen residuals.
inline BruteSelection brute_selection(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& z) {
  BruteSelection s;
  s.r = b - z - a * x;
  s.c = a.transpose() * z;
  const double total = s.r.squaredNorm() + s.c.squaredNorm();
  const double aug = double(a.rows()) + 2.0 * a.squaredNorm();
  double max_r = 0.0, max_c = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    max_r = std::max(max_r, s.r(i) * s.r(i) / (1.0 + a.row(i).squaredNorm()));
  for (Eigen::Index j = 0; j < a.cols(); ++j) max_c = std::max(max_c, s.c(j) * s.c(j) / a.col(j).squaredNorm());
  const double eps_r = 0.5 * (max_r / total + 1.0 / aug);
  const double eps_c = 0.5 * (max_c / total + 1.0 / aug);
  s.eps = std::max(eps_r, eps_c);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    if (s.r(i) * s.r(i) >= s.eps * total * (1.0 + a.row(i).squaredNorm())) s.omega_row.push_back(std::size_t(i));
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if (s.c(j) * s.c(j) >= s.eps * total * a.col(j).squaredNorm()) s.omega_col.push_back(std::size_t(j));
  return s;
}

/// Pearson statistic against expected probabilities; true when it stays
/// below the 1 - alpha quantile. Zero-probability cells must stay empty.
inline bool chi_square_ok(const std::vector<std::size_t>& counts, const std::vector<double>& p, double alpha = 1e-3) {
  double n = 0.0;
  for (auto c : counts) n += double(c);
  double stat = 0.0;
  int cells = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (p[k] == 0.0) {
      if (counts[k] != 0) return false;
      continue;
    }
    const double e = n * p[k];
    stat += (double(counts[k]) - e) * (double(counts[k]) - e) / e;
    ++cells;
  }
  if (cells < 2) return true;
  boost::math::chi_squared dist(cells - 1);
  return stat < boost::math::quantile(boost::math::complement(dist, alpha));
}

}  // namespace testing
