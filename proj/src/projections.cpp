#include "kaczlab/projections.hpp"

#include <string>

#include "kaczlab/error.hpp"

namespace kaczlab {

namespace {

void check_row(std::size_t i, const RowColMatrix& a) {
  if (i >= a.rows())
    throw Error(ErrorCode::index_out_of_range,
                "row index " + std::to_string(i + 1) + " outside 1.." + std::to_string(a.rows()));
}

void check_col(std::size_t j, const RowColMatrix& a) {
  if (j >= a.cols())
    throw Error(ErrorCode::index_out_of_range,
                "column index " + std::to_string(j + 1) + " outside 1.." + std::to_string(a.cols()));
}

void check_len(std::size_t got, std::size_t want, const char* what) {
  if (got != want) throw Error(ErrorCode::invalid_argument, std::string(what) + " has wrong length");
}

}  // namespace

double kaczmarz_row_project_inplace(std::span<double> x, std::size_t i, double rhs_i, const RowColMatrix& a) {
  check_row(i, a);
  check_len(x.size(), a.cols(), "x");
  const double step = (rhs_i - a.row_dot(i, x)) / a.row_norm_sq(i);
  a.row_axpy(i, step, x);
  return step;
}

Vector kaczmarz_row_project(std::span<const double> x, std::size_t i, double rhs_i, const RowColMatrix& a) {
  Vector out(x.begin(), x.end());
  kaczmarz_row_project_inplace(out, i, rhs_i, a);
  return out;
}

double augmented_row_update(std::span<double> z, std::span<double> x, std::size_t i,
                            std::span<const double> b, const RowColMatrix& a) {
  check_row(i, a);
  check_len(z.size(), a.rows(), "z");
  check_len(b.size(), a.rows(), "b");
  check_len(x.size(), a.cols(), "x");
  const double d = (b[i] - z[i] - a.row_dot(i, x)) / (1.0 + a.row_norm_sq(i));
  z[i] += d;
  a.row_axpy(i, d, x);
  return d;
}

double column_z_update(std::span<double> z, std::size_t j, const RowColMatrix& a) {
  check_col(j, a);
  check_len(z.size(), a.rows(), "z");
  const double mu = a.col_dot(j, z) / a.col_norm_sq(j);
  a.col_axpy(j, -mu, z);
  return mu;
}

}  // namespace kaczlab
