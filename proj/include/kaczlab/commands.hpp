#pragma once

// Subcommands behind the kaczlab executable. Each returns a process exit
// code: 0 ok, 2 flag error, 3 ingestion error, 4 oracle failure,
// 5 a run did not converge within --max-iters (report still written).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kaczlab/error.hpp"
#include "kaczlab/problems.hpp"

namespace kaczlab {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int flag_error = 2;
inline constexpr int ingestion = 3;
inline constexpr int oracle = 4;
inline constexpr int not_converged = 5;
}  // namespace exit_code

int exit_code_for(ErrorCode code);

struct CliOptions {
  // problem
  std::string matrix;     ///< .mtx (Matrix Market) or whitespace dense text
  std::string gen;        ///< gaussian:MxN or sparse:MxN:K
  std::string rhs = "nullspace";
  double noise_scale = 0.5;
  bool reference = true;  ///< compute x_star (RSE); forced on by rules that need it

  // runs
  std::vector<std::string> engines;
  double eta = 0.01;
  std::string stop = "lise";
  double tol = 1e-4;
  std::size_t window = 400;
  std::size_t max_iters = 200000;
  std::uint64_t seed = 0;
  std::size_t reps = 10;
  std::size_t rse_period = 0;
  bool bounds = false;

  // output
  std::string report;      ///< file path; stdout when empty
  std::string format = "csv";
  std::string images;      ///< directory for PGM output (tomo)
  std::string trace;       ///< branch trace file (solve, single engine)
  std::string out;         ///< gen: output path
  bool deterministic = false;  ///< omit wall time from JSON

  // tomography
  std::size_t N = 24;
  std::string angles = "0:1:178";
  std::size_t p = 0;  ///< 0 picks ceil(N * 125 / 60)
};

/// Builds A from --matrix or --gen and b = A x_seed + noise per --rhs.
LinearSystem assemble_system(const CliOptions& o);

/// Attaches x_star / z_star, reusing the on-disk cache keyed by content
/// hash. The directory is $KACZLAB_CACHE, else ~/.cache/kaczlab; caching is
/// skipped silently when the directory is unusable.
void attach_cached_reference(LinearSystem& sys);

int cmd_solve(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_bench(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_tomo(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_gen(const CliOptions& o, std::ostream& out, std::ostream& err);

}  // namespace kaczlab
