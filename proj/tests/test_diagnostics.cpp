#include "doctest.h"
#include "helpers.hpp"
#include "kaczlab/diagnostics.hpp"
#include "kaczlab/error.hpp"
#include "kaczlab/report.hpp"
#include "kaczlab/solvers.hpp"

using namespace kaczlab;
using doctest::Approx;

namespace {

// smallest nonzero singular value squared, from an SVD
double svd_lambda_min(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  double best = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) * s(k) > 1e-10 * a.squaredNorm()) best = s(k) * s(k);
  return best;
}

RunReport finished(double wall) {
  RunReport r;
  r.engine = "grak";
  r.status = RunStatus::rule_fired;
  r.wall_seconds = wall;
  return r;
}

}  // namespace

TEST_CASE("identity bounds by hand") {
  const auto id = RowColMatrix::from_dense({{1, 0}, {0, 1}});
  const auto r = compute_bounds(id);
  const double eta = std::pow(std::sqrt(1.25) - 0.5, 2);
  CHECK(r.lambda_min == Approx(1.0).epsilon(1e-12));
  CHECK(r.eta == Approx(0.381966).epsilon(1e-6));
  CHECK(r.eta == Approx(eta).epsilon(1e-14));
  CHECK(r.gamma == Approx(5.0).epsilon(1e-14));
  CHECK(r.beta == Approx(1.0 - 0.5 * (6.0 / 5.0 + 1.0) * eta / 6.0).epsilon(1e-14));
  CHECK(r.beta == Approx(0.9299729).epsilon(1e-7));
  CHECK(std::abs(r.alpha - 0.5) <= 1e-9);
  CHECK(std::abs(r.delta) <= 1e-9);
  CHECK(r.zeta == Approx(1.0 - eta / 6.0).epsilon(1e-14));
  CHECK(r.beta_tilde == Approx(1.0 - eta / 5.0).epsilon(1e-14));
  CHECK(r.theta_bracket.first == r.delta);
  CHECK(r.theta_bracket.second == r.alpha);
}

TEST_CASE("bounds agree with an SVD-based evaluation") {
  std::mt19937_64 g(1);
  const Eigen::MatrixXd a = testing::random_matrix(g, 30, 7);
  const auto r = compute_bounds(testing::from_eigen(a));
  const double lam = svd_lambda_min(a);
  CHECK(r.lambda_min == Approx(lam).epsilon(1e-10));
  const double F = a.squaredNorm();
  const double min_row = a.rowwise().squaredNorm().minCoeff(), min_col = a.colwise().squaredNorm().minCoeff();
  const double gamma = 2 * F + 30 - std::min(1 + min_row, min_col);
  const double eta = std::min(1.0, std::pow(std::sqrt(lam + 0.25) - 0.5, 2));
  CHECK(r.gamma == Approx(gamma).epsilon(1e-12));
  CHECK(r.eta == Approx(eta).epsilon(1e-10));
  CHECK(r.alpha == Approx(1 - lam / F).epsilon(1e-10));
  CHECK(r.delta == Approx(1 - lam / (F - min_col)).epsilon(1e-10));
}

TEST_CASE("rank-deficient and wide matrices use the nonzero spectrum") {
  std::mt19937_64 g(2);
  Eigen::MatrixXd a = testing::random_matrix(g, 25, 6);
  a.col(5) = a.col(0) - a.col(2);
  CHECK(lambda_min_nonzero(testing::from_eigen(a)) == Approx(svd_lambda_min(a)).epsilon(1e-8));
  const Eigen::MatrixXd w = testing::random_matrix(g, 5, 12);
  CHECK(lambda_min_nonzero(testing::from_eigen(w)) == Approx(svd_lambda_min(w)).epsilon(1e-10));
}

TEST_CASE("rate ordering and eta below lambda on seeded Gaussian matrices") {
  std::mt19937_64 g(3);
  int violations = 0;
  for (int s = 0; s < 20; ++s) {
    const int m = 50 + s * 350 / 19, n = 20 + s * 80 / 19;
    const auto r = compute_bounds(testing::from_eigen(testing::random_matrix(g, m, n)));
    if (!(r.beta_tilde < r.beta) || !(r.alpha < r.beta)) ++violations;
    CHECK(r.eta < r.lambda_min);
    for (double v : {r.beta, r.zeta, r.beta_tilde, r.alpha, r.delta}) {
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("oracle limits") {
  std::mt19937_64 g(4);
  const auto a = testing::from_eigen(testing::random_matrix(g, 10, 6));
  try {
    (void)lambda_min_nonzero(a, 5);
    FAIL("expected OracleUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::oracle_unavailable);
  }
  CHECK_NOTHROW((void)lambda_min_nonzero(a, 6));
  CHECK_THROWS_AS((void)compute_bounds(a, 0.0), Error);
}

TEST_CASE("speedup") {
  CHECK(speedup(finished(1.0), finished(1.0)) == 1.0);
  CHECK(speedup(finished(2.0), finished(1.0)) == 2.0);
  RunReport cut = finished(1.0);
  cut.status = RunStatus::max_iters;
  try {
    (void)speedup(cut, finished(1.0));
    FAIL("expected IncompleteRun");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::incomplete_run);
  }
  CHECK_THROWS_AS((void)speedup(finished(1.0), finished(0.0)), Error);
}

TEST_CASE("observed grak decay stays within the bound") {
  std::mt19937_64 g(5);
  std::vector<double> rates;
  double beta = 0.0;
  for (int s = 0; s < 20; ++s) {
    const auto sys = testing::random_inconsistent(g, 200, 50);
    const PreparedSystem ps(sys);
    if (s == 0) beta = compute_bounds(sys.mat).beta;
    auto st = init_state(ps, std::uint64_t(s));
    // least-squares slope of log error over k in [500, 2000]
    double sk = 0, sy = 0, skk = 0, sky = 0, cnt = 0;
    for (std::size_t k = 1; k <= 2000; ++k) {
      step(Engine::grak, st, ps);
      if (k < 500) continue;
      const double y = std::log(dist_sq(st.x, *sys.x_star) + dist_sq(st.z, *sys.z_star));
      sk += double(k);
      sy += y;
      skk += double(k) * double(k);
      sky += double(k) * y;
      cnt += 1;
    }
    const double slope = (cnt * sky - sk * sy) / (cnt * skk - sk * sk);
    rates.push_back(std::exp(slope));
  }
  CHECK(testing::median(rates) <= beta + 0.05);
}
