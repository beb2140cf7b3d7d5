#include "kaczlab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kaczlab/error.hpp"

namespace kaczlab {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2_sq(std::span<const double> v) { return dot(v, v); }

double norm2(std::span<const double> v) { return std::sqrt(norm2_sq(v)); }

double dist_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k])) {
      throw Error(ErrorCode::non_finite_entry,
                  std::string(what) + ": non-finite entry at position " + std::to_string(k + 1));
    }
  }
}

// ---------------------------------------------------------------------------
// construction

RowColMatrix RowColMatrix::from_dense(std::size_t m, std::size_t n, std::span<const double> values) {
  if (m == 0 || n == 0) throw Error(ErrorCode::invalid_argument, "matrix dimensions must be positive");
  if (values.size() != m * n) throw Error(ErrorCode::invalid_argument, "dense value count does not match m*n");
  require_finite(values, "matrix");

  RowColMatrix a;
  a.m_ = m;
  a.n_ = n;
  a.dense_ = true;
  a.row_val_.assign(values.begin(), values.end());
  a.col_val_.resize(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a.col_val_[j * m + i] = a.row_val_[i * n + j];
  a.nnz_ = static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](double v) { return v != 0.0; }));
  a.finalize();
  return a;
}

RowColMatrix RowColMatrix::from_dense(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw Error(ErrorCode::invalid_argument, "matrix dimensions must be positive");
  const std::size_t n = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw Error(ErrorCode::invalid_argument, "ragged dense rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return from_dense(rows.size(), n, flat);
}

RowColMatrix RowColMatrix::from_triplets(std::size_t m, std::size_t n, std::span<const Triplet> entries) {
  if (m == 0 || n == 0) throw Error(ErrorCode::invalid_argument, "matrix dimensions must be positive");
  for (const auto& t : entries) {
    if (t.row >= m || t.col >= n)
      throw Error(ErrorCode::index_out_of_range,
                  "triplet (" + std::to_string(t.row + 1) + ", " + std::to_string(t.col + 1) +
                      ") outside " + std::to_string(m) + "x" + std::to_string(n));
    if (!std::isfinite(t.value)) throw Error(ErrorCode::non_finite_entry, "matrix: non-finite triplet value");
  }

  std::vector<Triplet> sorted(entries.begin(), entries.end());
  std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  // merge duplicates, then drop zeros
  std::vector<Triplet> merged;
  merged.reserve(sorted.size());
  for (const auto& t : sorted) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
      merged.back().value += t.value;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Triplet& t) { return t.value == 0.0; });

  RowColMatrix a;
  a.m_ = m;
  a.n_ = n;
  a.dense_ = false;
  a.nnz_ = merged.size();

  a.row_ptr_.assign(m + 1, 0);
  a.row_idx_.resize(merged.size());
  a.row_val_.resize(merged.size());
  for (const auto& t : merged) ++a.row_ptr_[t.row + 1];
  std::partial_sum(a.row_ptr_.begin(), a.row_ptr_.end(), a.row_ptr_.begin());
  for (std::size_t k = 0; k < merged.size(); ++k) {
    a.row_idx_[k] = static_cast<Index>(merged[k].col);
    a.row_val_[k] = merged[k].value;
  }

  a.col_ptr_.assign(n + 1, 0);
  a.col_idx_.resize(merged.size());
  a.col_val_.resize(merged.size());
  for (const auto& t : merged) ++a.col_ptr_[t.col + 1];
  std::partial_sum(a.col_ptr_.begin(), a.col_ptr_.end(), a.col_ptr_.begin());
  std::vector<std::size_t> fill(a.col_ptr_.begin(), a.col_ptr_.end() - 1);
  // rows are visited in increasing order, so each column ends up sorted
  for (const auto& t : merged) {
    const std::size_t pos = fill[t.col]++;
    a.col_idx_[pos] = static_cast<Index>(t.row);
    a.col_val_[pos] = t.value;
  }

  a.finalize();
  return a;
}

void RowColMatrix::finalize() {
  row_norms_sq_.assign(m_, 0.0);
  col_norms_sq_.assign(n_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) row_norms_sq_[i] = norm2_sq(row(i).value);
  for (std::size_t j = 0; j < n_; ++j) col_norms_sq_[j] = norm2_sq(col(j).value);

  for (std::size_t i = 0; i < m_; ++i)
    if (row_norms_sq_[i] == 0.0) throw ZeroRowOrColumn(ZeroRowOrColumn::Kind::row, i);
  for (std::size_t j = 0; j < n_; ++j)
    if (col_norms_sq_[j] == 0.0) throw ZeroRowOrColumn(ZeroRowOrColumn::Kind::column, j);

  frob_sq_ = std::accumulate(row_norms_sq_.begin(), row_norms_sq_.end(), 0.0);
}

double RowColMatrix::frob() const { return std::sqrt(frob_sq_); }

// ---------------------------------------------------------------------------
// access

SliceView RowColMatrix::row(std::size_t i) const noexcept {
  if (dense_) return {{}, std::span<const double>(row_val_).subspan(i * n_, n_)};
  const std::size_t b = row_ptr_[i], e = row_ptr_[i + 1];
  return {std::span<const Index>(row_idx_).subspan(b, e - b), std::span<const double>(row_val_).subspan(b, e - b)};
}

SliceView RowColMatrix::col(std::size_t j) const noexcept {
  if (dense_) return {{}, std::span<const double>(col_val_).subspan(j * m_, m_)};
  const std::size_t b = col_ptr_[j], e = col_ptr_[j + 1];
  return {std::span<const Index>(col_idx_).subspan(b, e - b), std::span<const double>(col_val_).subspan(b, e - b)};
}

double RowColMatrix::row_dot(std::size_t i, std::span<const double> x) const noexcept {
  if (dense_) return dot(std::span<const double>(row_val_.data() + i * n_, n_), x);
  double s = 0.0;
  for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += row_val_[k] * x[row_idx_[k]];
  return s;
}

void RowColMatrix::row_axpy(std::size_t i, double alpha, std::span<double> y) const noexcept {
  if (dense_) {
    const double* a = row_val_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) y[j] += alpha * a[j];
    return;
  }
  for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[row_idx_[k]] += alpha * row_val_[k];
}

double RowColMatrix::col_dot(std::size_t j, std::span<const double> z) const noexcept {
  if (dense_) return dot(std::span<const double>(col_val_.data() + j * m_, m_), z);
  double s = 0.0;
  for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) s += col_val_[k] * z[col_idx_[k]];
  return s;
}

void RowColMatrix::col_axpy(std::size_t j, double alpha, std::span<double> y) const noexcept {
  if (dense_) {
    const double* a = col_val_.data() + j * m_;
    for (std::size_t i = 0; i < m_; ++i) y[i] += alpha * a[i];
    return;
  }
  for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) y[col_idx_[k]] += alpha * col_val_[k];
}

void RowColMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != m_) throw Error(ErrorCode::invalid_argument, "multiply: dimension mismatch");
  for (std::size_t i = 0; i < m_; ++i) y[i] = row_dot(i, x);
}

void RowColMatrix::multiply_transpose(std::span<const double> z, std::span<double> y) const {
  if (z.size() != m_ || y.size() != n_)
    throw Error(ErrorCode::invalid_argument, "multiply_transpose: dimension mismatch");
  for (std::size_t j = 0; j < n_; ++j) y[j] = col_dot(j, z);
}

Vector RowColMatrix::multiply(std::span<const double> x) const {
  Vector y(m_);
  multiply(x, y);
  return y;
}

Vector RowColMatrix::multiply_transpose(std::span<const double> z) const {
  Vector y(n_);
  multiply_transpose(z, y);
  return y;
}

double RowColMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= m_ || j >= n_) throw Error(ErrorCode::index_out_of_range, "at: index out of range");
  if (dense_) return row_val_[i * n_ + j];
  const auto b = row_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto e = row_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(b, e, static_cast<Index>(j));
  return (it != e && *it == j) ? row_val_[static_cast<std::size_t>(it - row_idx_.begin())] : 0.0;
}

std::vector<double> RowColMatrix::to_dense_row_major() const {
  std::vector<double> d(m_ * n_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) row(i).for_each([&](std::size_t j, double v) { d[i * n_ + j] = v; });
  return d;
}

std::vector<double> RowColMatrix::to_dense_from_columns() const {
  std::vector<double> d(m_ * n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) col(j).for_each([&](std::size_t i, double v) { d[i * n_ + j] = v; });
  return d;
}

std::vector<Triplet> RowColMatrix::to_triplets() const {
  std::vector<Triplet> t;
  t.reserve(nnz_);
  for (std::size_t i = 0; i < m_; ++i)
    row(i).for_each([&](std::size_t j, double v) {
      if (v != 0.0) t.push_back({i, j, v});
    });
  return t;
}

// ---------------------------------------------------------------------------
// augmented view

AugmentedView::AugmentedView(const RowColMatrix& base, std::span<const double> b) : base_(&base), b_(b) {
  if (b.size() != base.rows()) throw Error(ErrorCode::invalid_argument, "augmented view: b has wrong length");
}

double AugmentedView::row_norm_sq(std::size_t t) const noexcept {
  const std::size_t m = base_->rows();
  return t < m ? 1.0 + base_->row_norm_sq(t) : base_->col_norm_sq(t - m);
}

double AugmentedView::frob_sq() const noexcept {
  return static_cast<double>(base_->rows()) + 2.0 * base_->frob_sq();
}

double AugmentedView::min_row_norm_sq() const noexcept {
  const auto rn = base_->row_norms_sq();
  const auto cn = base_->col_norms_sq();
  return std::min(1.0 + *std::min_element(rn.begin(), rn.end()), *std::min_element(cn.begin(), cn.end()));
}

double AugmentedView::residual(std::size_t t, std::span<const double> z, std::span<const double> x) const noexcept {
  const std::size_t m = base_->rows();
  if (t < m) return b_[t] - z[t] - base_->row_dot(t, x);
  return -base_->col_dot(t - m, z);
}

}  // namespace kaczlab
