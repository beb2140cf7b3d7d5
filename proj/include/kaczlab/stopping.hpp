#pragma once

// Stopping rules as predicates over the iterate stream.
//
// The check functions are pure apart from lise_check, which advances the
// window record it is handed. StopMonitor applies one rule at its natural
// cadence and keeps the evaluation trace.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kaczlab/matrix.hpp"
#include "kaczlab/problems.hpp"

namespace kaczlab {

enum class StopKind { none, rse, ase, rres, aise, lise, rek_native, grak_native };

const char* to_string(StopKind kind);
/// Accepts the CLI spellings: none, rse, ase, rres, aise, lise, rek-native, grak-native.
StopKind parse_stop_kind(const std::string& name);

inline constexpr std::size_t default_window = 400;

struct StoppingRule {
  StopKind kind = StopKind::lise;
  double tol = 1e-4;
  std::size_t window = default_window;  ///< L, for LISE
  /// Iterations between evaluations; 0 picks the rule's default
  /// (L for LISE/RSE/ASE/RRes/GRAK-native, 1 for AISE, 8 min(m,n) for REK-native).
  std::size_t period = 0;
};

/// Throws InvalidArgument unless tol > 0 and window >= 1.
void validate(const StoppingRule& rule);

struct CheckResult {
  bool fired = false;
  double value = 0.0;
};

/// Holds the one snapshot LISE compares against.
struct LiseWindow {
  Vector snapshot;                ///< stacked [z; x] (or plain x) from iteration snapshot_k
  std::size_t snapshot_k = 0;
  double last_value = -1.0;       ///< negative until the first evaluation

  void reset(std::span<const double> z, std::span<const double> x, std::size_t k = 0);
};

/// ||x~_k - snapshot|| / L with x~ = [z; x] (pass an empty z to monitor x
/// alone); fires when the value is below tol, then stores x~_k as the new
/// snapshot. Throws WindowNotReady unless k is a positive multiple of L and
/// the window holds iterate k - L.
CheckResult lise_check(LiseWindow& window, std::span<const double> z, std::span<const double> x, std::size_t k,
                       std::size_t L, double tol);

/// ||x - x_star|| / ||x_star||; fires when <= tol.
CheckResult rse_check(std::span<const double> x, std::optional<std::span<const double>> x_star, double tol);
/// ||x - x_star||; fires when <= tol.
CheckResult ase_check(std::span<const double> x, std::optional<std::span<const double>> x_star, double tol);
/// ||b - A x|| / ||b||; fires when <= tol.
CheckResult rres_check(const RowColMatrix& a, std::span<const double> b, std::span<const double> x, double tol);
/// ||x_k - x_prev|| / ||b||; fires when <= tol.
CheckResult aise_check(std::span<const double> x_k, std::span<const double> x_prev, std::span<const double> b,
                       double tol);

struct RekNativeResult {
  bool fired = false;
  bool deferred = false;        ///< x == 0, nothing evaluated
  double residual_value = 0.0;  ///< ||A x - (b - z)|| / (||A||_F ||x||)
  double normal_value = 0.0;    ///< ||A^H z|| / (||A||_F^2 ||x||)
};

RekNativeResult rek_native_check(std::span<const double> x, std::span<const double> z, const LinearSystem& sys,
                                 double tol);

/// (||x - x_star||^2 + ||z - z_star||^2) / (||x_star||^2 + ||b - z_star||^2);
/// fires when <= tol. b - z_star is b restricted to range(A).
CheckResult grak_native_check(std::span<const double> x, std::span<const double> z,
                              std::optional<std::span<const double>> x_star,
                              std::optional<std::span<const double>> z_star, std::span<const double> b, double tol);

struct Evaluation {
  std::size_t k = 0;
  double value = 0.0;
  double value2 = 0.0;  ///< second REK-native quantity, 0 otherwise
  bool fired = false;
};

class StopMonitor {
 public:
  /// `stacked` selects LISE on [z; x] (augmented engines) instead of x alone.
  StopMonitor(const StoppingRule& rule, const LinearSystem& sys, bool stacked);

  const StoppingRule& rule() const noexcept { return rule_; }
  std::size_t period() const noexcept { return period_; }

  /// Registers the initial iterate (k = 0).
  void start(std::span<const double> x, std::span<const double> z);
  /// Called after iteration k completes; returns the evaluation if one was due.
  std::optional<Evaluation> observe(std::size_t k, std::span<const double> x, std::span<const double> z);

  const std::vector<Evaluation>& trace() const noexcept { return trace_; }

 private:
  StoppingRule rule_;
  const LinearSystem* sys_;
  bool stacked_;
  std::size_t period_;
  LiseWindow window_;
  Vector prev_x_;
  std::vector<Evaluation> trace_;
};

}  // namespace kaczlab
