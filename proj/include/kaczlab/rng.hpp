#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace kaczlab {

/// Reproducible random stream identified by (seed, stream_id).
///
/// xoshiro256** keyed through splitmix64, so the same pair yields the same
/// sequence on every platform and distinct stream ids give unrelated
/// streams. Owned by a single run; not thread safe.
class RngStream {
 public:
  using result_type = std::uint64_t;

  static constexpr const char* algorithm = "xoshiro256**/splitmix64";

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next(); }

  std::uint64_t next() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer in [0, n); unbiased. n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Standard normal (Marsaglia polar method).
  double normal() noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stream ids used by generators and engines, kept apart so that e.g. the
/// matrix and the noise never share draws.
namespace streams {
inline constexpr std::uint64_t matrix = 1;
inline constexpr std::uint64_t solution = 2;
inline constexpr std::uint64_t noise = 3;
inline constexpr std::uint64_t solver = 4;
}  // namespace streams

}  // namespace kaczlab
