#pragma once

// Run reports and their CSV / JSON renderings.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kaczlab/diagnostics.hpp"
#include "kaczlab/stopping.hpp"

namespace kaczlab {

enum class RunStatus { rule_fired, converged, max_iters, failed };

const char* to_string(RunStatus s);

struct BranchCounts {
  std::size_t row = 0;
  std::size_t column = 0;
  std::size_t both = 0;  ///< REK steps, which update z and x together
};

struct RunReport {
  std::string engine;
  std::string provenance;
  std::size_t m = 0, n = 0, nnz = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::optional<double> eta_s;  ///< sampled engine only
  std::string stop_rule;
  double tol = 0.0;
  std::size_t window = 0;
  std::size_t max_iters = 0;

  std::size_t iterations = 0;  ///< IT
  double wall_seconds = 0.0;   ///< CPU, solver loop only
  RunStatus status = RunStatus::max_iters;
  std::string error;           ///< set when status == failed
  std::optional<double> final_rse;
  std::optional<double> snr;
  std::vector<Evaluation> stop_trace;
  std::vector<std::pair<std::size_t, double>> rse_history;
  BranchCounts branches;
  std::uint64_t iterate_hash = 0;  ///< FNV-1a over the final [z; x] bits
  std::optional<BoundReport> bounds;

  bool completed() const noexcept { return status == RunStatus::rule_fired || status == RunStatus::converged; }
};

/// Fixed CSV column order.
inline constexpr const char* csv_header = "engine,m,n,nnz,seed,IT,CPU_s,RSE,SNR,speedup_vs_grak";

/// One CSV line (no newline) for a single run; absent values are left empty.
std::string csv_row(const RunReport& r, std::optional<double> speedup_vs_grak = std::nullopt);

/// Mean over the repetitions of one engine in a bench.
struct BenchRow {
  std::string engine;
  std::size_t m = 0, n = 0, nnz = 0;
  std::uint64_t seed = 0;  ///< base seed; repetition i used seed + i
  std::size_t runs = 0;
  std::size_t failed = 0;  ///< runs that errored or hit max_iters
  double it_mean = 0.0;
  double cpu_mean = 0.0;
  std::optional<double> rse_mean;
  std::optional<double> snr_mean;
  std::optional<double> speedup_vs_grak;
};

/// Means over the completed reports of one engine (all reports when none completed).
BenchRow summarize(std::span<const RunReport> reps);
std::string csv_row(const BenchRow& r);

void write_bounds_csv(std::ostream& os, const BoundReport& b);

/// Serialized JSON text of a report, wall time included.
std::string to_json_text(const RunReport& r, bool with_wall_time = true);
std::string to_json_text(std::span<const RunReport> runs, std::span<const BenchRow> rows, bool with_wall_time = true);

/// FNV-1a over the bit patterns of z then x.
std::uint64_t iterate_hash(std::span<const double> z, std::span<const double> x);

}  // namespace kaczlab
