#pragma once

// Row/column accessible matrix storage shared by every solver.
//
// Dense matrices keep a row-major array plus a column-major mirror; sparse
// matrices keep CSR and CSC side by side. Either way A^(i) and A_(j) are
// contiguous, which is what the augmented Kaczmarz updates need.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kaczlab {

using Vector = std::vector<double>;
using Index = std::uint32_t;

double dot(std::span<const double> a, std::span<const double> b);
double norm2_sq(std::span<const double> v);
double norm2(std::span<const double> v);
/// ||a - b||_2^2
double dist_sq(std::span<const double> a, std::span<const double> b);
/// Throws NonFiniteEntry naming `what` when any entry is NaN or Inf.
void require_finite(std::span<const double> v, const char* what);

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// A row or column slice. An empty `index` means the slice is dense and
/// `value[k]` is the entry at position k.
struct SliceView {
  std::span<const Index> index;
  std::span<const double> value;

  bool dense() const noexcept { return index.empty(); }

  template <class F>
  void for_each(F&& f) const {
    if (index.empty()) {
      for (std::size_t k = 0; k < value.size(); ++k) f(k, value[k]);
    } else {
      for (std::size_t k = 0; k < index.size(); ++k) f(std::size_t{index[k]}, value[k]);
    }
  }
};

class RowColMatrix {
 public:
  /// `values` is row-major, length m*n.
  static RowColMatrix from_dense(std::size_t m, std::size_t n, std::span<const double> values);
  static RowColMatrix from_dense(const std::vector<std::vector<double>>& rows);
  /// Duplicate coordinates are summed, explicit zeros dropped.
  static RowColMatrix from_triplets(std::size_t m, std::size_t n, std::span<const Triplet> entries);

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return nnz_; }
  bool is_dense() const noexcept { return dense_; }

  std::span<const double> row_norms_sq() const noexcept { return row_norms_sq_; }
  std::span<const double> col_norms_sq() const noexcept { return col_norms_sq_; }
  double row_norm_sq(std::size_t i) const noexcept { return row_norms_sq_[i]; }
  double col_norm_sq(std::size_t j) const noexcept { return col_norms_sq_[j]; }
  double frob_sq() const noexcept { return frob_sq_; }
  double frob() const;

  SliceView row(std::size_t i) const noexcept;
  SliceView col(std::size_t j) const noexcept;

  // Hot-path kernels. Indices are not range checked.
  double row_dot(std::size_t i, std::span<const double> x) const noexcept;
  /// y += alpha * (A^(i))^H
  void row_axpy(std::size_t i, double alpha, std::span<double> y) const noexcept;
  double col_dot(std::size_t j, std::span<const double> z) const noexcept;
  /// y += alpha * A_(j)
  void col_axpy(std::size_t j, double alpha, std::span<double> y) const noexcept;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y = A^H z
  void multiply_transpose(std::span<const double> z, std::span<double> y) const;
  Vector multiply(std::span<const double> x) const;
  Vector multiply_transpose(std::span<const double> z) const;

  double at(std::size_t i, std::size_t j) const;
  std::vector<double> to_dense_row_major() const;
  /// Rebuilds a dense row-major array from the column storage only.
  std::vector<double> to_dense_from_columns() const;
  std::vector<Triplet> to_triplets() const;

 private:
  RowColMatrix() = default;
  void finalize();

  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::size_t nnz_ = 0;
  bool dense_ = true;

  // dense: row-major values and a column-major mirror
  // sparse: CSR (row_ptr_, row_idx_, row_val_) and CSC (col_ptr_, col_idx_, col_val_)
  std::vector<double> row_val_;
  std::vector<double> col_val_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_ptr_;
  std::vector<Index> row_idx_;
  std::vector<Index> col_idx_;

  std::vector<double> row_norms_sq_;
  std::vector<double> col_norms_sq_;
  double frob_sq_ = 0.0;
};

/// The consistent augmented system [I A; A^H 0][z; x] = [b; 0], never
/// materialized. Augmented row t < m is [e_t^T | A^(t)], row m + j is
/// [A_(j)^H | 0].
class AugmentedView {
 public:
  AugmentedView(const RowColMatrix& base, std::span<const double> b);

  const RowColMatrix& base() const noexcept { return *base_; }
  std::span<const double> rhs() const noexcept { return b_; }
  std::size_t size() const noexcept { return base_->rows() + base_->cols(); }

  double row_norm_sq(std::size_t t) const noexcept;
  /// m + 2 ||A||_F^2
  double frob_sq() const noexcept;
  double min_row_norm_sq() const noexcept;
  /// Residual of augmented equation t: b_t - z_t - A^(t) x for t < m and
  /// -A_(t-m)^H z otherwise.
  double residual(std::size_t t, std::span<const double> z, std::span<const double> x) const noexcept;

 private:
  const RowColMatrix* base_;
  std::span<const double> b_;
};

}  // namespace kaczlab
