#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kaczlab/matrix.hpp"

namespace kaczlab {

/// 2-D parallel-beam geometry over an N x N grid of unit pixels centred at
/// the origin. Angles are in degrees; 0 means horizontal rays.
struct TomoSpec {
  std::size_t N = 0;
  std::vector<double> angles;
  std::size_t p = 0;  ///< rays per angle
};

struct TomoProblem {
  RowColMatrix mat;
  Vector x_true;              ///< phantom, column-major, length N*N
  std::size_t nominal_rows;   ///< p * |angles|
  std::size_t dropped_rows;   ///< rays with zero length through the grid
};

/// Ray-driven intersection lengths. Ray k of every angle sits at signed
/// offset (k + 1/2) N / p - N / 2 from the centre, so all rays cross the
/// grid. Rays of zero length are dropped (or rejected when `strict`).
/// Throws DegenerateGeometry for bad specs or pixels no ray touches.
TomoProblem gen_paralleltomo(const TomoSpec& spec, bool strict = false);

/// Phantom alone: concentric disks of three intensities.
Vector tomo_phantom(std::size_t N);

/// Parses "a:step:b" (inclusive) or a comma list of angles in degrees.
std::vector<double> parse_angles(const std::string& text);

/// Binary PGM (P5, 8 bit). `image` is column-major N x N; output is row
/// major with values min-max scaled to 0..255.
void write_pgm(std::ostream& out, std::span<const double> image, std::size_t N);
void write_pgm(const std::string& path, std::span<const double> image, std::size_t N);

}  // namespace kaczlab
