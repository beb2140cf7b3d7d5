#pragma once

// REK, GRAK, AGRAK and the sampled greedy method as resumable step machines
// over SolverState, plus a driver that runs one engine under a stopping rule.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kaczlab/greedy.hpp"
#include "kaczlab/problems.hpp"
#include "kaczlab/report.hpp"
#include "kaczlab/rng.hpp"
#include "kaczlab/sampling.hpp"
#include "kaczlab/stopping.hpp"

namespace kaczlab {

enum class Engine { rek, grak, agrak, sampled };

const char* to_string(Engine e);
Engine parse_engine(const std::string& name);

/// Immutable per-system data shared by every run on the system: the row and
/// column samplers. Keeps a reference to `sys`, which must outlive it.
class PreparedSystem {
 public:
  explicit PreparedSystem(const LinearSystem& sys);

  const LinearSystem& system() const noexcept { return *sys_; }
  const RowColMatrix& mat() const noexcept { return sys_->mat; }
  std::span<const double> b() const noexcept { return sys_->b; }
  std::size_t rows() const noexcept { return sys_->rows(); }
  std::size_t cols() const noexcept { return sys_->cols(); }
  const WeightedSampler& row_sampler() const noexcept { return rows_; }
  const WeightedSampler& col_sampler() const noexcept { return cols_; }
  /// m + 2 ||A||_F^2
  double aug_frob_sq() const noexcept { return aug_frob_sq_; }

 private:
  const LinearSystem* sys_;
  WeightedSampler rows_;
  WeightedSampler cols_;
  double aug_frob_sq_;
};

inline constexpr std::size_t no_index = std::numeric_limits<std::size_t>::max();
inline constexpr std::size_t cache_refresh_period = 1000;

struct SolverState {
  Vector x;  ///< x_k, length n
  Vector z;  ///< z_k, length m
  std::size_t k = 0;
  RngStream rng;

  // Greedy engines keep b - z - A x and A^H z up to date between steps.
  Vector res_row;
  Vector res_col;
  bool cache_valid = false;
  std::size_t since_refresh = 0;

  std::optional<SubsetSampler> subset;
  Vector scratch_row;
  Vector scratch_col;

  SolverState(std::uint64_t seed, std::uint64_t stream_id) : rng(seed, stream_id) {}
};

/// x_0 = 0, z_0 = b, k = 0, rng = (seed, stream_id).
SolverState init_state(const PreparedSystem& ps, std::uint64_t seed, std::uint64_t stream_id = streams::solver);
/// Starts from a caller-supplied x_0, which must lie in range(A^H) for the
/// convergence guarantees to hold.
SolverState init_state(const PreparedSystem& ps, std::span<const double> x0, std::uint64_t seed,
                       std::uint64_t stream_id = streams::solver);

/// Recomputes the residual caches from x and z.
void refresh_residuals(SolverState& st, const PreparedSystem& ps);

enum class Branch { row, column, both, converged };

const char* to_string(Branch b);

/// `row` is i_k for row branches, the x-refresh row of AGRAK/sampled column
/// branches and the REK row; `col` is j_k. Absent indices are no_index.
struct StepOutcome {
  Branch branch = Branch::converged;
  std::size_t row = no_index;
  std::size_t col = no_index;
  double criterion = 0.0;  ///< greedy criterion of the chosen augmented row

  bool operator==(const StepOutcome&) const = default;
};

// Individual steps. Each advances k by one unless it reports Converged.

StepOutcome rek_step(SolverState& st, const PreparedSystem& ps);
/// REK update with the indices supplied instead of drawn.
StepOutcome rek_step_with(SolverState& st, const PreparedSystem& ps, std::size_t i, std::size_t j);

/// Selection from residuals computed fresh from x and z. Throws ZeroResidual
/// when the augmented residual vanishes.
GreedySelection grak_build_selection(const SolverState& st, const PreparedSystem& ps);
StepOutcome grak_step(SolverState& st, const PreparedSystem& ps);
StepOutcome agrak_step(SolverState& st, const PreparedSystem& ps);
StepOutcome sampled_step(SolverState& st, const PreparedSystem& ps, double eta_s);

StepOutcome step(Engine e, SolverState& st, const PreparedSystem& ps, double eta_s = 0.01);

/// Squared greedy criteria: r_i^2 / (1 + ||A^(i)||^2) for augmented rows
/// t < m and (A_(j)^H z)^2 / ||A_(j)||^2 for t = m + j, from fresh residuals.
Vector greedy_criteria(const SolverState& st, const PreparedSystem& ps);

struct RunConfig {
  Engine engine = Engine::agrak;
  StoppingRule stop;
  std::size_t max_iters = 200000;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = streams::solver;
  double eta_s = 0.01;
  /// Record RSE every this many iterations when x_star is known (0 = never).
  std::size_t rse_period = 0;
  /// One line per step: k, branch, index, criterion.
  std::ostream* trace = nullptr;
  bool keep_steps = false;
};

struct RunOutput {
  RunReport report;
  Vector x;
  Vector z;
  std::vector<StepOutcome> steps;  ///< filled when keep_steps
};

/// Iterates until the rule fires, the augmented residual vanishes or
/// max_iters is reached (flagged in the report, not thrown).
RunOutput run(const PreparedSystem& ps, const RunConfig& cfg);

}  // namespace kaczlab
