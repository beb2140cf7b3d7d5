#include <numeric>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "kaczlab/error.hpp"
#include "kaczlab/problems.hpp"
#include "kaczlab/rng.hpp"
#include "kaczlab/tomo.hpp"

using namespace kaczlab;
using doctest::Approx;

TEST_CASE("gaussian generator is deterministic") {
  const auto a = gen_gaussian(2, 2, 9);
  const auto b = gen_gaussian(2, 2, 9);
  const auto c = gen_gaussian(2, 2, 10);
  CHECK(a.to_dense_row_major() == b.to_dense_row_major());
  CHECK(a.to_dense_row_major() != c.to_dense_row_major());
  CHECK(a.is_dense());
}

TEST_CASE("gaussian generator moments") {
  const auto a = gen_gaussian(1000, 1000, 1);
  const auto v = a.to_dense_row_major();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
  double var = 0.0;
  for (double e : v) var += (e - mean) * (e - mean);
  var /= double(v.size());
  CHECK(std::abs(mean) <= 0.005);
  CHECK(var == Approx(1.0).epsilon(0.01));
}

TEST_CASE("sparse generator fills every column") {
  const auto a = gen_sparse(300, 40, 3, 2);
  CHECK_FALSE(a.is_dense());
  CHECK(a.nnz() >= 900);
  for (std::size_t j = 0; j < a.cols(); ++j) CHECK(a.col_norm_sq(j) > 0.0);
  CHECK(gen_sparse(300, 40, 3, 2).to_triplets().size() == a.to_triplets().size());
  CHECK_THROWS_AS((void)gen_sparse(3, 2, 3, 1), Error);
}

TEST_CASE("reference oracle on closed-form systems") {
  const auto id = RowColMatrix::from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const Vector b3 = {1, 2, 3};
  auto r = reference_solution(id, b3);
  for (int i = 0; i < 3; ++i) CHECK(r.x_star[i] == Approx(b3[i]).epsilon(1e-14));
  CHECK(norm2(r.z_star) <= 1e-14);

  const auto col = RowColMatrix::from_dense({{1}, {1}});
  r = reference_solution(col, Vector{1, 3});
  CHECK(r.x_star[0] == Approx(2.0).epsilon(1e-14));
  CHECK(r.z_star[0] == Approx(-1.0).epsilon(1e-14));
  CHECK(r.z_star[1] == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("reference oracle matches the pseudo-inverse, including rank deficiency") {
  std::mt19937_64 g(21);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::MatrixXd e = testing::random_matrix(g, 30, 8);
    if (rep % 2) e.col(7) = e.col(0) + e.col(1);  // rank 7: least-norm solution is unique, LS solutions are not
    const auto a = testing::from_eigen(e);
    const Vector b = testing::random_vector(g, 30);
    const auto r = reference_solution(a, b);
    const Vector expect = testing::from_eigen(testing::pinv_solve(e, testing::to_eigen(b)));
    CHECK(testing::rel_err(r.x_star, expect) <= 1e-9);
    CHECK(r.normal_residual <= default_oracle_tol * a.frob() * norm2(b));
    const Vector ax = a.multiply(r.x_star);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(r.z_star[i] == Approx(b[i] - ax[i]).epsilon(1e-10));
  }
}

TEST_CASE("oracle refinement is monotone in the tolerance") {
  std::mt19937_64 g(4);
  const Eigen::MatrixXd e = testing::random_matrix(g, 40, 10);
  const auto a = testing::from_eigen(e);
  const Vector b = testing::random_vector(g, 40);
  const Vector exact = testing::from_eigen(testing::pinv_solve(e, testing::to_eigen(b)));
  const double loose = testing::rel_err(reference_solution(a, b, 1e-6).x_star, exact);
  const double tight = testing::rel_err(reference_solution(a, b, 1e-12).x_star, exact);
  CHECK(tight <= loose + 1e-15);
}

TEST_CASE("oracle reports non-convergence") {
  std::mt19937_64 g(4);
  const auto a = testing::from_eigen(testing::random_matrix(g, 40, 10));
  const Vector b = testing::random_vector(g, 40);
  try {
    (void)reference_solution(a, b, 1e-14, 2);
    FAIL("expected OracleNotConverged");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::oracle_not_converged);
  }
}

TEST_CASE("inconsistent right-hand side on the 2x1 example") {
  const auto a = RowColMatrix::from_dense({{1}, {1}});
  const Vector b = build_inconsistent_rhs(a, Vector{2}, 3, 0.5);
  const double r0 = b[0] - 2.0, r1 = b[1] - 2.0;
  CHECK(r0 == Approx(-r1).epsilon(1e-12));
  CHECK(std::hypot(r0, r1) == Approx(0.5 * std::sqrt(8.0)).epsilon(1e-12));
}

TEST_CASE("inconsistent right-hand side is orthogonal to range(A) and scaled") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = gen_gaussian(60, 15, seed);
    const Vector xs = gen_gaussian_vector(15, seed, streams::solution);
    const Vector b = build_inconsistent_rhs(a, xs, seed, 0.5);
    const Vector ax = a.multiply(xs);
    Vector r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - ax[i];
    CHECK(norm2(a.multiply_transpose(r)) <= 1e-10 * a.frob() * norm2(r));
    CHECK(norm2(r) == Approx(0.5 * norm2(ax)).epsilon(1e-12));
    CHECK(build_inconsistent_rhs(a, xs, seed, 0.5) == b);
  }
}

TEST_CASE("square nonsingular matrix has no null-space noise") {
  const auto a = gen_gaussian(6, 6, 1);
  try {
    (void)build_inconsistent_rhs(a, Vector(6, 1.0), 1, 0.5);
    FAIL("expected TrivialNullSpace");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::trivial_null_space);
  }
}

TEST_CASE("randn right-hand side has the requested scale") {
  const auto a = gen_gaussian(20, 5, 1);
  const Vector xs(5, 1.0);
  const Vector b = build_randn_rhs(a, xs, 2, 0.25);
  const Vector ax = a.multiply(xs);
  CHECK(std::sqrt(dist_sq(b, ax)) == Approx(0.25 * norm2(ax)).epsilon(1e-12));
}

TEST_CASE("snr examples") {
  CHECK(snr(Vector{1, 1}, Vector{1, 0}) == 2.0);
  CHECK(snr(Vector{1, 0}, Vector{2, 0}) == 1.0);
  CHECK(std::isinf(snr(Vector{1, 2}, Vector{1, 2})));
  CHECK(snr(Vector{3, 4}, Vector{0, 0}) == 1.0);
  CHECK_THROWS_AS(snr(Vector{1}, Vector{1, 2}), Error);
}

TEST_CASE("content hash separates matrices and right-hand sides") {
  const auto a = gen_gaussian(4, 3, 1);
  const Vector b(4, 1.0);
  Vector b2 = b;
  b2[3] = 2.0;
  CHECK(content_hash(a, b) == content_hash(gen_gaussian(4, 3, 1), b));
  CHECK(content_hash(a, b) != content_hash(a, b2));
  CHECK(content_hash(a, b) != content_hash(gen_gaussian(4, 3, 2), b));
}

// ---------------------------------------------------------------------------
// tomography

TEST_CASE("N=60 with 179 angles and 125 rays is 22375 x 3600") {
  TomoSpec s{60, parse_angles("0:1:178"), 125};
  CHECK(s.angles.size() == 179);
  const auto t = gen_paralleltomo(s);
  CHECK(t.mat.rows() == 22375);
  CHECK(t.mat.cols() == 3600);
  CHECK(t.nominal_rows == 22375);
  CHECK(t.dropped_rows == 0);
}

TEST_CASE("axis-aligned rays cross two unit pixels") {
  const auto t = gen_paralleltomo(TomoSpec{2, {0.0, 90.0}, 2});
  CHECK(t.mat.rows() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    double sum = 0.0;
    t.mat.row(i).for_each([&](std::size_t, double v) { sum += v; });
    CHECK(sum == Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("ray lengths are bounded by the grid diagonal") {
  const std::size_t N = 12;
  const auto t = gen_paralleltomo(TomoSpec{N, parse_angles("0:7:179"), 17});
  for (std::size_t i = 0; i < t.mat.rows(); ++i) {
    double sum = 0.0;
    bool nonneg = true;
    t.mat.row(i).for_each([&](std::size_t, double v) {
      sum += v;
      nonneg = nonneg && v >= 0.0;
    });
    CHECK(nonneg);
    CHECK(sum <= double(N) * std::sqrt(2.0) + 1e-9);
    CHECK(sum > 0.0);
  }
}

TEST_CASE("tomography geometry errors") {
  CHECK_THROWS_AS((void)gen_paralleltomo(TomoSpec{1, {0.0}, 3}), Error);
  CHECK_THROWS_AS((void)gen_paralleltomo(TomoSpec{4, {}, 3}), Error);
  CHECK_THROWS_AS((void)gen_paralleltomo(TomoSpec{4, {0.0}, 0}), Error);
  try {
    // a single horizontal ray leaves most pixels untouched
    (void)gen_paralleltomo(TomoSpec{4, {0.0}, 1});
    FAIL("expected DegenerateGeometry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_geometry);
  }
}

TEST_CASE("phantom and angle parsing") {
  const Vector x = tomo_phantom(24);
  CHECK(x.size() == 576);
  CHECK(*std::max_element(x.begin(), x.end()) == 1.0);
  CHECK(x[0] == 0.0);
  const auto c = 12 * 24 + 12;
  CHECK(x[c] == 0.8);
  CHECK(parse_angles("0,45,90") == std::vector<double>{0, 45, 90});
  CHECK(parse_angles("10:20:50") == std::vector<double>{10, 30, 50});
  CHECK_THROWS_AS(parse_angles("a:b"), Error);
  CHECK_THROWS_AS(parse_angles("0:0:5"), Error);
}

TEST_CASE("pgm output is row major and scaled") {
  // column-major 2x2: (r0,c0)=0 (r1,c0)=1 (r0,c1)=2 (r1,c1)=3
  const Vector img = {0, 1, 2, 3};
  std::ostringstream os;
  write_pgm(os, img, 2);
  const std::string s = os.str();
  const std::string header = "P5\n2 2\n255\n";
  REQUIRE(s.size() == header.size() + 4);
  CHECK(s.substr(0, header.size()) == header);
  const auto* px = reinterpret_cast<const unsigned char*>(s.data() + header.size());
  CHECK(px[0] == 0);
  CHECK(px[1] == 170);
  CHECK(px[2] == 85);
  CHECK(px[3] == 255);
}
