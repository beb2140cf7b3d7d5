#include "kaczlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kaczlab/error.hpp"

namespace kaczlab {

WeightedSampler::WeightedSampler(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "weighted sampler needs at least one weight");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::invalid_argument, "weights must be finite and >= 0");
    total += w;
  }
  if (total <= 0.0) throw Error(ErrorCode::invalid_argument, "weights sum to zero");

  p_.resize(n);
  prob_.assign(n, 0.0);
  alias_.resize(n);
  std::iota(alias_.begin(), alias_.end(), std::size_t{0});

  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t k = 0; k < n; ++k) {
    p_[k] = weights[k] / total;
    scaled[k] = p_[k] * static_cast<double>(n);
    (scaled[k] < 1.0 ? small : large).push_back(k);
  }
  std::size_t fallback = 0;
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    fallback = l;
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // leftovers are 1 up to rounding
  for (std::size_t k : large) prob_[k] = 1.0;
  for (std::size_t k : small) {
    // a zero weight must never be drawn, even when rounding strands it here
    if (p_[k] > 0.0) {
      prob_[k] = 1.0;
    } else {
      prob_[k] = 0.0;
      alias_[k] = fallback;
    }
  }
}

std::size_t WeightedSampler::draw(RngStream& rng) const noexcept {
  const std::size_t k = static_cast<std::size_t>(rng.below(prob_.size()));
  return rng.uniform() < prob_[k] ? k : alias_[k];
}

std::size_t weighted_row_sample(const WeightedSampler& rows, RngStream& rng) { return rows.draw(rng); }

std::size_t weighted_column_sample(const WeightedSampler& columns, RngStream& rng) { return columns.draw(rng); }

// ---------------------------------------------------------------------------

std::size_t subset_size(std::size_t m, std::size_t n, double eta_s) {
  if (!(eta_s > 0.0) || eta_s > 1.0)
    throw Error(ErrorCode::invalid_ratio, "sampling ratio must satisfy 0 < eta <= 1, got " + std::to_string(eta_s));
  const std::size_t total = m + n;
  // the relative nudge keeps products such as 1000 * 0.01 from landing just below an integer
  const auto k = static_cast<std::size_t>(std::floor(static_cast<double>(total) * eta_s * (1.0 + 1e-12)));
  return std::clamp<std::size_t>(k, 1, total);
}

SubsetSampler::SubsetSampler(std::size_t m, std::size_t n, double eta_s)
    : m_(m), total_(m + n), k_(subset_size(m, n, eta_s)) {
  swaps_.reserve(2 * k_);
  out_.indices.reserve(k_);
}

const SampleSubset& SubsetSampler::draw(RngStream& rng) {
  swaps_.clear();
  out_.indices.clear();
  auto slot = [&](std::size_t p) {
    const auto it = swaps_.find(p);
    return it == swaps_.end() ? p : it->second;
  };
  for (std::size_t i = 0; i < k_; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(total_ - i));
    const std::size_t vi = slot(i);
    const std::size_t vj = slot(j);
    out_.indices.push_back(vj);
    swaps_[j] = vi;
  }
  std::sort(out_.indices.begin(), out_.indices.end());
  out_.split = static_cast<std::size_t>(
      std::lower_bound(out_.indices.begin(), out_.indices.end(), m_) - out_.indices.begin());
  return out_;
}

SampleSubset simple_random_subset(std::size_t m, std::size_t n, double eta_s, RngStream& rng) {
  SubsetSampler sampler(m, n, eta_s);
  return sampler.draw(rng);
}

// ---------------------------------------------------------------------------

std::size_t grak_residual_sample(const GreedySelection& sel, RngStream& rng) {
  double mass = 0.0;
  for (std::size_t i : sel.omega_row) mass += sel.r_tilde[i] * sel.r_tilde[i];
  for (std::size_t j : sel.omega_col) mass += sel.s_tilde[j] * sel.s_tilde[j];
  if (!(mass > 0.0)) throw Error(ErrorCode::zero_residual, "projected augmented residual is zero");

  const std::size_t m = sel.r_tilde.size();
  const double target = rng.uniform() * mass;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i : sel.omega_row) {
    const double w = sel.r_tilde[i] * sel.r_tilde[i];
    if (w == 0.0) continue;
    acc += w;
    last = i;
    if (target < acc) return i;
  }
  for (std::size_t j : sel.omega_col) {
    const double w = sel.s_tilde[j] * sel.s_tilde[j];
    if (w == 0.0) continue;
    acc += w;
    last = m + j;
    if (target < acc) return m + j;
  }
  return last;
}

}  // namespace kaczlab
