#include "kaczlab/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "kaczlab/error.hpp"
#include "kaczlab/rng.hpp"

namespace kaczlab {

LinearSystem::LinearSystem(RowColMatrix a, Vector rhs, std::string origin)
    : mat(std::move(a)), b(std::move(rhs)), provenance(std::move(origin)) {
  if (b.size() != mat.rows()) throw Error(ErrorCode::invalid_argument, "right-hand side length does not match rows");
  require_finite(b, "b");
}

RowColMatrix gen_gaussian(std::size_t m, std::size_t n, std::uint64_t seed) {
  RngStream rng(seed, streams::matrix);
  std::vector<double> v(m * n);
  for (auto& e : v) e = rng.normal();
  return RowColMatrix::from_dense(m, n, v);
}

RowColMatrix gen_sparse(std::size_t m, std::size_t n, std::size_t per_row, std::uint64_t seed) {
  if (per_row == 0 || per_row > n) throw Error(ErrorCode::invalid_argument, "entries per row must be in 1..n");
  RngStream rng(seed, streams::matrix);
  std::vector<Triplet> t;
  t.reserve(m * per_row + n);
  std::vector<char> used(n, 0);
  std::vector<std::size_t> picked;
  for (std::size_t i = 0; i < m; ++i) {
    picked.clear();
    while (picked.size() < per_row) {
      const auto j = static_cast<std::size_t>(rng.below(n));
      if (std::find(picked.begin(), picked.end(), j) != picked.end()) continue;
      picked.push_back(j);
    }
    for (std::size_t j : picked) {
      double v;
      do v = rng.normal(); while (v == 0.0);
      t.push_back({i, j, v});
      used[j] = 1;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (used[j]) continue;
    const auto i = static_cast<std::size_t>(rng.below(m));
    t.push_back({i, j, rng.normal() + 1.0});
  }
  return RowColMatrix::from_triplets(m, n, t);
}

Vector gen_gaussian_vector(std::size_t len, std::uint64_t seed, std::uint64_t stream_id) {
  RngStream rng(seed, stream_id);
  Vector v(len);
  for (auto& e : v) e = rng.normal();
  return v;
}

// ---------------------------------------------------------------------------
// CGLS

ReferenceSolution reference_solution(const RowColMatrix& a, std::span<const double> b, double oracle_tol,
                                     std::size_t max_iters) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m) throw Error(ErrorCode::invalid_argument, "reference_solution: b has wrong length");
  require_finite(b, "b");
  if (max_iters == 0) max_iters = std::max<std::size_t>(2000, 50 * std::min(m, n));

  ReferenceSolution out;
  out.x_star.assign(n, 0.0);
  Vector& x = out.x_star;
  const double target = oracle_tol * a.frob() * norm2(b);

  Vector r(b.begin(), b.end());
  Vector s = a.multiply_transpose(r);
  Vector p = s;
  Vector q(m);
  double gamma = norm2_sq(s);

  std::size_t it = 0;
  for (;;) {
    if (std::sqrt(gamma) <= target) {
      // confirm on the true residual; restart from it if recursion drifted
      a.multiply(x, q);
      for (std::size_t i = 0; i < m; ++i) r[i] = b[i] - q[i];
      a.multiply_transpose(r, s);
      gamma = norm2_sq(s);
      if (std::sqrt(gamma) <= target) break;
      p = s;
    }
    if (it == max_iters) {
      throw Error(ErrorCode::oracle_not_converged,
                  "least-squares oracle did not reach tolerance in " + std::to_string(max_iters) +
                      " iterations (normal residual " + std::to_string(std::sqrt(gamma)) + ")");
    }
    a.multiply(p, q);
    const double qq = norm2_sq(q);
    if (qq == 0.0) break;
    const double alpha = gamma / qq;
    for (std::size_t j = 0; j < n; ++j) x[j] += alpha * p[j];
    for (std::size_t i = 0; i < m; ++i) r[i] -= alpha * q[i];
    a.multiply_transpose(r, s);
    const double gamma_next = norm2_sq(s);
    const double beta = gamma_next / gamma;
    gamma = gamma_next;
    for (std::size_t j = 0; j < n; ++j) p[j] = s[j] + beta * p[j];
    ++it;
  }

  out.iterations = it;
  a.multiply(x, q);
  out.z_star.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.z_star[i] = b[i] - q[i];
  out.normal_residual = norm2(a.multiply_transpose(out.z_star));
  return out;
}

void attach_reference(LinearSystem& sys, double oracle_tol) {
  auto ref = reference_solution(sys.mat, sys.b, oracle_tol);
  sys.x_star = std::move(ref.x_star);
  sys.z_star = std::move(ref.z_star);
}

// ---------------------------------------------------------------------------
// right-hand sides

namespace {

Vector checked_image(const RowColMatrix& a, std::span<const double> x_seed) {
  if (x_seed.size() != a.cols()) throw Error(ErrorCode::invalid_argument, "seed solution has wrong length");
  require_finite(x_seed, "seed solution");
  Vector ax = a.multiply(x_seed);
  if (norm2(ax) == 0.0) throw Error(ErrorCode::invalid_argument, "A * x_seed is zero; noise scale undefined");
  return ax;
}

// w minus its least-squares fit, repeated until orthogonal to range(A)
Vector project_out_range(const RowColMatrix& a, Vector w) {
  const double frob = a.frob();
  for (int pass = 0; pass < 3; ++pass) {
    const auto fit = reference_solution(a, w, default_oracle_tol);
    w = fit.z_star;
    const double rn = norm2(w);
    if (rn == 0.0 || norm2(a.multiply_transpose(w)) <= 1e-11 * frob * rn) break;
  }
  return w;
}

}  // namespace

Vector build_inconsistent_rhs(const RowColMatrix& a, std::span<const double> x_seed, std::uint64_t noise_seed,
                              double noise_scale) {
  if (!(noise_scale > 0.0)) throw Error(ErrorCode::invalid_argument, "noise scale must be positive");
  Vector ax = checked_image(a, x_seed);
  const double target = noise_scale * norm2(ax);
  const double frob = a.frob();

  for (std::uint64_t draw = 0; draw < 3; ++draw) {
    Vector w = gen_gaussian_vector(a.rows(), noise_seed, streams::noise + 1000 * draw);
    const double wn = norm2(w);
    Vector r = project_out_range(a, std::move(w));
    const double rn = norm2(r);
    if (rn <= 1e-8 * wn) continue;
    if (norm2(a.multiply_transpose(r)) > 1e-10 * frob * rn) continue;
    const double scale = target / rn;
    for (std::size_t i = 0; i < ax.size(); ++i) ax[i] += scale * r[i];
    return ax;
  }
  throw Error(ErrorCode::trivial_null_space, "range(A) is the whole space: no nonzero vector in null(A^H)");
}

Vector build_randn_rhs(const RowColMatrix& a, std::span<const double> x_seed, std::uint64_t noise_seed,
                       double noise_scale) {
  if (!(noise_scale > 0.0)) throw Error(ErrorCode::invalid_argument, "noise scale must be positive");
  Vector ax = checked_image(a, x_seed);
  const Vector w = gen_gaussian_vector(a.rows(), noise_seed, streams::noise);
  const double scale = noise_scale * norm2(ax) / norm2(w);
  for (std::size_t i = 0; i < ax.size(); ++i) ax[i] += scale * w[i];
  return ax;
}

double snr(std::span<const double> x_ref, std::span<const double> x_hat) {
  if (x_ref.size() != x_hat.size()) throw Error(ErrorCode::invalid_argument, "snr: length mismatch");
  const double den = dist_sq(x_ref, x_hat);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return norm2_sq(x_ref) / den;
}

// FNV-1a over dimensions, structure and values
std::uint64_t content_hash(const RowColMatrix& a, std::span<const double> b) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < len; ++k) {
      h ^= p[k];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t dims[3] = {a.rows(), a.cols(), a.nnz()};
  mix(dims, sizeof dims);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    a.row(i).for_each([&](std::size_t j, double v) {
      if (v == 0.0) return;
      const std::uint64_t jj = j;
      mix(&jj, sizeof jj);
      mix(&v, sizeof v);
    });
  }
  mix(b.data(), b.size() * sizeof(double));
  return h;
}

}  // namespace kaczlab
