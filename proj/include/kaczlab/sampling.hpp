#pragma once

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "kaczlab/greedy.hpp"
#include "kaczlab/matrix.hpp"
#include "kaczlab/rng.hpp"

namespace kaczlab {

/// Discrete distribution proportional to nonnegative weights, drawn in O(1)
/// after O(len) preprocessing (Walker/Vose alias table). Immutable and
/// shareable once built.
class WeightedSampler {
 public:
  explicit WeightedSampler(std::span<const double> weights);

  /// Rows with probability ||A^(i)||^2 / ||A||_F^2.
  static WeightedSampler rows(const RowColMatrix& a) { return WeightedSampler(a.row_norms_sq()); }
  /// Columns with probability ||A_(j)||^2 / ||A||_F^2.
  static WeightedSampler columns(const RowColMatrix& a) { return WeightedSampler(a.col_norms_sq()); }

  std::size_t size() const noexcept { return prob_.size(); }
  double probability(std::size_t k) const noexcept { return p_[k]; }
  std::size_t draw(RngStream& rng) const noexcept;

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
  std::vector<double> p_;
};

std::size_t weighted_row_sample(const WeightedSampler& rows, RngStream& rng);
std::size_t weighted_column_sample(const WeightedSampler& columns, RngStream& rng);

/// Uniform subset of {0 .. m+n-1}, sorted, split at m into a row block and
/// a column block.
struct SampleSubset {
  std::vector<std::size_t> indices;
  std::size_t split = 0;  ///< number of indices < m

  std::span<const std::size_t> row_part() const { return std::span(indices).first(split); }
  std::span<const std::size_t> col_part() const { return std::span(indices).subspan(split); }
};

/// max(1, floor((m + n) * eta_s)); throws InvalidRatio unless 0 < eta_s <= 1.
std::size_t subset_size(std::size_t m, std::size_t n, double eta_s);

/// Partial Fisher-Yates over an implicit identity permutation: O(k) time and
/// memory per draw. Holds reusable buffers, so one instance per run.
class SubsetSampler {
 public:
  SubsetSampler(std::size_t m, std::size_t n, double eta_s);

  std::size_t sample_size() const noexcept { return k_; }
  const SampleSubset& draw(RngStream& rng);

 private:
  std::size_t m_;
  std::size_t total_;
  std::size_t k_;
  std::unordered_map<std::size_t, std::size_t> swaps_;
  SampleSubset out_;
};

SampleSubset simple_random_subset(std::size_t m, std::size_t n, double eta_s, RngStream& rng);

/// Augmented index t in {0 .. m+n-1} with probability proportional to
/// r_tilde[t]^2 (t < m) or s_tilde[t-m]^2. Throws ZeroResidual when both
/// projected residuals vanish.
std::size_t grak_residual_sample(const GreedySelection& sel, RngStream& rng);

}  // namespace kaczlab
