#include "kaczlab/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "kaczlab/error.hpp"

namespace kaczlab {

namespace {

constexpr double kAxisEps = 1e-14;

// Fills `hits` with (pixel, length) pairs for one ray; empty when it misses.
void trace_ray(std::size_t N, double theta_deg, double offset, std::vector<double>& ts,
               std::vector<std::pair<std::size_t, double>>& hits) {
  hits.clear();
  ts.clear();
  const double th = theta_deg * std::numbers::pi / 180.0;
  const double dx = std::cos(th), dy = std::sin(th);
  const double px = -std::sin(th) * offset, py = std::cos(th) * offset;
  const double half = static_cast<double>(N) / 2.0;

  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  auto slab = [&](double p0, double d) {
    if (std::abs(d) < kAxisEps) {
      if (p0 <= -half || p0 >= half) t0 = std::numeric_limits<double>::infinity();
      return;
    }
    double a = (-half - p0) / d, b = (half - p0) / d;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  };
  slab(px, dx);
  slab(py, dy);
  if (!(t1 > t0)) return;

  ts.push_back(t0);
  ts.push_back(t1);
  for (std::size_t k = 0; k <= N; ++k) {
    const double g = -half + static_cast<double>(k);
    if (std::abs(dx) >= kAxisEps) {
      const double t = (g - px) / dx;
      if (t > t0 && t < t1) ts.push_back(t);
    }
    if (std::abs(dy) >= kAxisEps) {
      const double t = (g - py) / dy;
      if (t > t0 && t < t1) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());

  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double len = ts[k + 1] - ts[k];
    if (len <= 1e-12) continue;
    const double tm = 0.5 * (ts[k] + ts[k + 1]);
    const double xm = px + tm * dx, ym = py + tm * dy;
    const auto c = std::clamp<long>(static_cast<long>(std::floor(xm + half)), 0, static_cast<long>(N) - 1);
    const auto r = std::clamp<long>(static_cast<long>(std::floor(half - ym)), 0, static_cast<long>(N) - 1);
    hits.emplace_back(static_cast<std::size_t>(c) * N + static_cast<std::size_t>(r), len);
  }
}

}  // namespace

Vector tomo_phantom(std::size_t N) {
  Vector x(N * N, 0.0);
  const double half = static_cast<double>(N) / 2.0;
  const double n = static_cast<double>(N);
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t r = 0; r < N; ++r) {
      const double xc = static_cast<double>(c) + 0.5 - half;
      const double yc = half - static_cast<double>(r) - 0.5;
      const double rho = std::hypot(xc, yc);
      double v = 0.0;
      if (rho < 0.10 * n) v = 0.8;
      else if (rho < 0.25 * n) v = 0.5;
      else if (rho < 0.40 * n) v = 1.0;
      x[c * N + r] = v;
    }
  }
  return x;
}

TomoProblem gen_paralleltomo(const TomoSpec& spec, bool strict) {
  if (spec.N < 2) throw Error(ErrorCode::degenerate_geometry, "tomography grid needs N >= 2");
  if (spec.p < 1) throw Error(ErrorCode::degenerate_geometry, "tomography needs at least one ray per angle");
  if (spec.angles.empty()) throw Error(ErrorCode::degenerate_geometry, "tomography needs at least one angle");
  for (double a : spec.angles)
    if (!std::isfinite(a)) throw Error(ErrorCode::degenerate_geometry, "non-finite projection angle");

  const std::size_t N = spec.N;
  const double width = static_cast<double>(N);
  std::vector<Triplet> entries;
  entries.reserve(spec.angles.size() * spec.p * 2 * N);
  std::vector<double> ts;
  std::vector<std::pair<std::size_t, double>> hits;
  std::size_t row = 0, dropped = 0;

  for (double theta : spec.angles) {
    for (std::size_t k = 0; k < spec.p; ++k) {
      const double offset = (static_cast<double>(k) + 0.5) * width / static_cast<double>(spec.p) - width / 2.0;
      trace_ray(N, theta, offset, ts, hits);
      if (hits.empty()) {
        if (strict)
          throw Error(ErrorCode::degenerate_geometry,
                      "ray " + std::to_string(k + 1) + " at angle " + std::to_string(theta) + " misses the grid");
        ++dropped;
        continue;
      }
      for (const auto& [pix, len] : hits) entries.push_back({row, pix, len});
      ++row;
    }
  }

  std::vector<char> touched(N * N, 0);
  for (const auto& e : entries) touched[e.col] = 1;
  for (std::size_t j = 0; j < N * N; ++j)
    if (!touched[j])
      throw Error(ErrorCode::degenerate_geometry,
                  "pixel " + std::to_string(j + 1) + " is not crossed by any ray (add angles or rays)");

  return TomoProblem{RowColMatrix::from_triplets(row, N * N, entries), tomo_phantom(N), spec.angles.size() * spec.p,
                     dropped};
}

std::vector<double> parse_angles(const std::string& text) {
  std::vector<double> out;
  auto fail = [&] { return Error(ErrorCode::invalid_argument, "bad angle specification '" + text + "'"); };
  if (text.find(':') != std::string::npos) {
    std::istringstream in(text);
    double a, step, b;
    char c1, c2;
    if (!(in >> a >> c1 >> step >> c2 >> b) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a) throw fail();
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) out.push_back(a + static_cast<double>(k) * step);
    return out;
  }
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
    } catch (const std::exception&) {
      throw fail();
    }
  }
  if (out.empty()) throw fail();
  return out;
}

void write_pgm(std::ostream& out, std::span<const double> image, std::size_t N) {
  if (image.size() != N * N) throw Error(ErrorCode::invalid_argument, "image size does not match N*N");
  const auto [lo, hi] = std::minmax_element(image.begin(), image.end());
  const double range = *hi - *lo;
  out << "P5\n" << N << ' ' << N << "\n255\n";
  for (std::size_t r = 0; r < N; ++r) {
    for (std::size_t c = 0; c < N; ++c) {
      const double v = range > 0.0 ? (image[c * N + r] - *lo) / range : 0.0;
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
  }
}

void write_pgm(const std::string& path, std::span<const double> image, std::size_t N) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  write_pgm(out, image, N);
}

}  // namespace kaczlab
