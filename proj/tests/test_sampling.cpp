#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "kaczlab/error.hpp"
#include "kaczlab/rng.hpp"
#include "kaczlab/sampling.hpp"

using namespace kaczlab;
using doctest::Approx;

using testing::chi_square_ok;

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 1), b(42, 1), c(42, 2), d(43, 1);
  bool differ_c = false, differ_d = false;
  for (int k = 0; k < 100; ++k) {
    const auto va = a.next();
    CHECK(va == b.next());
    differ_c = differ_c || va != c.next();
    differ_d = differ_d || va != d.next();
  }
  CHECK(differ_c);
  CHECK(differ_d);
}

TEST_CASE("rng uniform, below and normal ranges") {
  RngStream r(1, 1);
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    CHECK(r.below(7) < 7);
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / 1e5) < 0.02);
  CHECK(sq / 1e5 == Approx(1.0).epsilon(0.02));
}

TEST_CASE("weighted sampler probabilities") {
  const WeightedSampler s(std::vector<double>{1, 3});
  CHECK(s.probability(0) == Approx(0.25));
  CHECK(s.probability(1) == Approx(0.75));
  const auto one = RowColMatrix::from_dense({{1, 2, 3}});
  const auto rows = WeightedSampler::rows(one);
  RngStream r(1, 1);
  for (int k = 0; k < 100; ++k) CHECK(weighted_row_sample(rows, r) == 0);
  const auto col = RowColMatrix::from_dense({{1}, {2}});
  const auto cols = WeightedSampler::columns(col);
  for (int k = 0; k < 100; ++k) CHECK(weighted_column_sample(cols, r) == 0);
  const auto sq = RowColMatrix::from_dense({{1, 1}, {1, -1}});
  CHECK(WeightedSampler::columns(sq).probability(0) == Approx(0.5));
  CHECK_THROWS_AS(WeightedSampler(std::vector<double>{0, 0}), Error);
  CHECK_THROWS_AS(WeightedSampler(std::vector<double>{1, -1}), Error);
}

TEST_CASE("weighted row draws within three sigma") {
  const WeightedSampler s(std::vector<double>{1, 1, 2});
  RngStream r(7, 4);
  const int N = 100000;
  std::vector<std::size_t> c(3, 0);
  for (int k = 0; k < N; ++k) ++c[s.draw(r)];
  const std::vector<double> p = {0.25, 0.25, 0.5};
  for (int k = 0; k < 3; ++k) CHECK(std::abs(double(c[k]) / N - p[k]) <= 3.0 * std::sqrt(p[k] * (1 - p[k]) / N));
  CHECK(chi_square_ok(c, p));
}

TEST_CASE("weighted column draws within three sigma") {
  const auto a = RowColMatrix::from_dense({{1, 2}});
  const auto s = WeightedSampler::columns(a);
  RngStream r(8, 4);
  const int N = 100000;
  std::vector<std::size_t> c(2, 0);
  for (int k = 0; k < N; ++k) ++c[weighted_column_sample(s, r)];
  CHECK(std::abs(double(c[1]) / N - 0.8) <= 3.0 * std::sqrt(0.16 / N));
}

TEST_CASE("subset size rule") {
  CHECK(subset_size(900, 100, 0.01) == 10);
  CHECK(subset_size(40, 10, 0.001) == 1);
  CHECK(subset_size(3, 2, 1.0) == 5);
  CHECK_THROWS_AS(subset_size(3, 2, 0.0), Error);
  CHECK_THROWS_AS(subset_size(3, 2, 1.5), Error);
  try {
    subset_size(3, 2, -1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_ratio);
  }
}

TEST_CASE("subsets are sorted, unique and split at m") {
  RngStream r(3, 4);
  SubsetSampler s(30, 20, 0.2);
  for (int k = 0; k < 200; ++k) {
    const auto& sub = s.draw(r);
    REQUIRE(sub.indices.size() == 10);
    for (std::size_t t = 1; t < sub.indices.size(); ++t) CHECK(sub.indices[t - 1] < sub.indices[t]);
    CHECK(sub.indices.back() < 50);
    for (auto i : sub.row_part()) CHECK(i < 30);
    for (auto i : sub.col_part()) CHECK(i >= 30);
    CHECK(sub.row_part().size() + sub.col_part().size() == 10);
  }
}

TEST_CASE("subset inclusion frequency") {
  RngStream r(5, 4);
  SubsetSampler s(12, 8, 0.25);
  const int N = 100000;
  std::vector<int> hits(20, 0);
  for (int k = 0; k < N; ++k)
    for (auto i : s.draw(r).indices) ++hits[i];
  for (int i = 0; i < 20; ++i) CHECK(std::abs(hits[i] / double(N) - 0.25) <= 3.0 * std::sqrt(0.25 * 0.75 / N));
}

TEST_CASE("grak residual sample probabilities") {
  GreedySelection sel;
  sel.r_tilde = {1, 2};
  sel.s_tilde = {2};
  sel.omega_row = {0, 1};
  sel.omega_col = {0};
  RngStream r(9, 4);
  const int N = 100000;
  std::vector<std::size_t> c(3, 0);
  for (int k = 0; k < N; ++k) ++c[grak_residual_sample(sel, r)];
  const std::vector<double> p = {1.0 / 9, 4.0 / 9, 4.0 / 9};
  for (int k = 0; k < 3; ++k) CHECK(std::abs(double(c[k]) / N - p[k]) <= 3.0 * std::sqrt(p[k] * (1 - p[k]) / N));
  CHECK(chi_square_ok(c, p));

  GreedySelection conc;
  conc.r_tilde = {0, 0, 5, 0};
  conc.s_tilde = {0, 0};
  conc.omega_row = {2};
  for (int k = 0; k < 100; ++k) CHECK(grak_residual_sample(conc, r) == 2);

  GreedySelection zero;
  zero.r_tilde = {0};
  zero.s_tilde = {0};
  try {
    grak_residual_sample(zero, r);
    FAIL("expected ZeroResidual");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::zero_residual);
  }
}

TEST_CASE("exhaustive subset uniformity for small index sets") {
  RngStream r(12, 4);
  for (std::size_t total = 2; total <= 6; ++total) {
    for (std::size_t m = 1; m < total; ++m) {
      const std::size_t n = total - m;
      for (std::size_t k = 1; k < total; ++k) {
        const double eta = (double(k) + 0.5) / double(total);
        SubsetSampler s(m, n, eta);
        REQUIRE(s.sample_size() == k);
        std::map<std::vector<std::size_t>, std::size_t> freq;
        const int N = 20000;
        for (int t = 0; t < N; ++t) ++freq[s.draw(r).indices];
        std::size_t subsets = 1;
        for (std::size_t q = 0; q < k; ++q) subsets = subsets * (total - q) / (q + 1);
        CHECK(freq.size() == subsets);
        std::vector<std::size_t> counts;
        for (auto& [_, c] : freq) counts.push_back(c);
        CHECK(chi_square_ok(counts, std::vector<double>(counts.size(), 1.0 / double(subsets))));
      }
    }
  }
}

TEST_CASE("simple_random_subset is reproducible") {
  RngStream a(1, 4), b(1, 4);
  for (int k = 0; k < 20; ++k) CHECK(simple_random_subset(10, 5, 0.3, a).indices == simple_random_subset(10, 5, 0.3, b).indices);
}
