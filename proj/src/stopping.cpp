#include "kaczlab/stopping.hpp"

#include <algorithm>
#include <cmath>

#include "kaczlab/error.hpp"

namespace kaczlab {

const char* to_string(StopKind kind) {
  switch (kind) {
    case StopKind::none: return "none";
    case StopKind::rse: return "rse";
    case StopKind::ase: return "ase";
    case StopKind::rres: return "rres";
    case StopKind::aise: return "aise";
    case StopKind::lise: return "lise";
    case StopKind::rek_native: return "rek-native";
    case StopKind::grak_native: return "grak-native";
  }
  return "?";
}

StopKind parse_stop_kind(const std::string& name) {
  for (StopKind k : {StopKind::none, StopKind::rse, StopKind::ase, StopKind::rres, StopKind::aise, StopKind::lise,
                     StopKind::rek_native, StopKind::grak_native}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorCode::invalid_argument, "unknown stopping rule '" + name + "'");
}

void validate(const StoppingRule& rule) {
  if (!(rule.tol > 0.0) || !std::isfinite(rule.tol))
    throw Error(ErrorCode::invalid_argument, "stopping tolerance must be positive");
  if (rule.window < 1) throw Error(ErrorCode::invalid_argument, "LISE window must be at least 1");
}

// ---------------------------------------------------------------------------

void LiseWindow::reset(std::span<const double> z, std::span<const double> x, std::size_t k) {
  snapshot.assign(z.begin(), z.end());
  snapshot.insert(snapshot.end(), x.begin(), x.end());
  snapshot_k = k;
  last_value = -1.0;
}

CheckResult lise_check(LiseWindow& window, std::span<const double> z, std::span<const double> x, std::size_t k,
                       std::size_t L, double tol) {
  if (L == 0 || k == 0 || k % L != 0)
    throw Error(ErrorCode::window_not_ready, "LISE evaluated at k=" + std::to_string(k) + ", not a positive multiple of L=" +
                                                 std::to_string(L));
  if (window.snapshot_k + L != k || window.snapshot.size() != z.size() + x.size())
    throw Error(ErrorCode::window_not_ready, "LISE window does not hold iterate k - L");

  double s = 0.0;
  const std::size_t m = z.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double d = z[i] - window.snapshot[i];
    s += d * d;
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - window.snapshot[m + j];
    s += d * d;
  }
  const double value = std::sqrt(s) / static_cast<double>(L);
  std::copy(z.begin(), z.end(), window.snapshot.begin());
  std::copy(x.begin(), x.end(), window.snapshot.begin() + static_cast<std::ptrdiff_t>(m));
  window.snapshot_k = k;
  window.last_value = value;
  return {value < tol, value};
}

namespace {

std::span<const double> need_reference(std::optional<std::span<const double>> ref, const char* what) {
  if (!ref || ref->empty()) throw Error(ErrorCode::reference_unavailable, std::string(what) + " requires a reference solution");
  return *ref;
}

}  // namespace

CheckResult rse_check(std::span<const double> x, std::optional<std::span<const double>> x_star, double tol) {
  const auto ref = need_reference(x_star, "RSE");
  const double den = norm2(ref);
  if (den == 0.0) throw Error(ErrorCode::reference_unavailable, "RSE undefined for a zero reference solution");
  const double v = std::sqrt(dist_sq(x, ref)) / den;
  return {v <= tol, v};
}

CheckResult ase_check(std::span<const double> x, std::optional<std::span<const double>> x_star, double tol) {
  const auto ref = need_reference(x_star, "ASE");
  const double v = std::sqrt(dist_sq(x, ref));
  return {v <= tol, v};
}

CheckResult rres_check(const RowColMatrix& a, std::span<const double> b, std::span<const double> x, double tol) {
  const Vector ax = a.multiply(x);
  const double v = std::sqrt(dist_sq(b, ax)) / norm2(b);
  return {v <= tol, v};
}

CheckResult aise_check(std::span<const double> x_k, std::span<const double> x_prev, std::span<const double> b,
                       double tol) {
  const double bn = norm2(b);
  if (bn == 0.0) throw Error(ErrorCode::invalid_argument, "AISE undefined for b = 0");
  const double v = std::sqrt(dist_sq(x_k, x_prev)) / bn;
  return {v <= tol, v};
}

RekNativeResult rek_native_check(std::span<const double> x, std::span<const double> z, const LinearSystem& sys,
                                 double tol) {
  RekNativeResult out;
  const double xn = norm2(x);
  if (xn == 0.0) {
    out.deferred = true;
    return out;
  }
  const auto& a = sys.mat;
  Vector ax = a.multiply(x);
  for (std::size_t i = 0; i < ax.size(); ++i) ax[i] -= sys.b[i] - z[i];
  const Vector az = a.multiply_transpose(z);
  out.residual_value = norm2(ax) / (a.frob() * xn);
  out.normal_value = norm2(az) / (a.frob_sq() * xn);
  out.fired = out.residual_value <= tol && out.normal_value <= tol;
  return out;
}

CheckResult grak_native_check(std::span<const double> x, std::span<const double> z,
                              std::optional<std::span<const double>> x_star,
                              std::optional<std::span<const double>> z_star, std::span<const double> b, double tol) {
  const auto xs = need_reference(x_star, "GRAK native rule");
  const auto zs = need_reference(z_star, "GRAK native rule");
  const double num = dist_sq(x, xs) + dist_sq(z, zs);
  const double den = norm2_sq(xs) + dist_sq(b, zs);
  if (den == 0.0) throw Error(ErrorCode::reference_unavailable, "GRAK native rule undefined for b = 0");
  const double v = num / den;
  return {v <= tol, v};
}

// ---------------------------------------------------------------------------

StopMonitor::StopMonitor(const StoppingRule& rule, const LinearSystem& sys, bool stacked)
    : rule_(rule), sys_(&sys), stacked_(stacked) {
  validate(rule_);
  switch (rule_.kind) {
    case StopKind::lise: period_ = rule_.window; break;
    case StopKind::aise: period_ = rule_.period ? rule_.period : 1; break;
    case StopKind::rek_native:
      period_ = rule_.period ? rule_.period : 8 * std::min(sys.rows(), sys.cols());
      break;
    default: period_ = rule_.period ? rule_.period : rule_.window; break;
  }
  if ((rule_.kind == StopKind::rse || rule_.kind == StopKind::ase) && !sys.x_star)
    throw Error(ErrorCode::reference_unavailable, std::string(to_string(rule_.kind)) + " needs a reference solution");
  if (rule_.kind == StopKind::grak_native && !sys.has_reference())
    throw Error(ErrorCode::reference_unavailable, "grak-native needs a reference solution");
}

void StopMonitor::start(std::span<const double> x, std::span<const double> z) {
  trace_.clear();
  if (rule_.kind == StopKind::lise) window_.reset(stacked_ ? z : std::span<const double>{}, x, 0);
  if (rule_.kind == StopKind::aise) prev_x_.assign(x.begin(), x.end());
}

std::optional<Evaluation> StopMonitor::observe(std::size_t k, std::span<const double> x, std::span<const double> z) {
  if (rule_.kind == StopKind::none) return std::nullopt;
  if (rule_.kind == StopKind::aise) {
    // AISE compares against the previous iterate, so track it every step
    std::optional<Evaluation> ev;
    if (k % period_ == 0) {
      const auto r = aise_check(x, prev_x_, sys_->b, rule_.tol);
      ev = Evaluation{k, r.value, 0.0, r.fired};
      trace_.push_back(*ev);
    }
    std::copy(x.begin(), x.end(), prev_x_.begin());
    return ev;
  }
  if (k == 0 || k % period_ != 0) return std::nullopt;

  Evaluation ev{k, 0.0, 0.0, false};
  const auto ref = [](const std::optional<Vector>& v) -> std::optional<std::span<const double>> {
    if (!v) return std::nullopt;
    return std::span<const double>(*v);
  };
  switch (rule_.kind) {
    case StopKind::lise: {
      const auto r = lise_check(window_, stacked_ ? z : std::span<const double>{}, x, k, rule_.window, rule_.tol);
      ev.value = r.value;
      ev.fired = r.fired;
      break;
    }
    case StopKind::rse: {
      const auto r = rse_check(x, ref(sys_->x_star), rule_.tol);
      ev.value = r.value;
      ev.fired = r.fired;
      break;
    }
    case StopKind::ase: {
      const auto r = ase_check(x, ref(sys_->x_star), rule_.tol);
      ev.value = r.value;
      ev.fired = r.fired;
      break;
    }
    case StopKind::rres: {
      const auto r = rres_check(sys_->mat, sys_->b, x, rule_.tol);
      ev.value = r.value;
      ev.fired = r.fired;
      break;
    }
    case StopKind::rek_native: {
      const auto r = rek_native_check(x, z, *sys_, rule_.tol);
      if (r.deferred) return std::nullopt;
      ev.value = r.residual_value;
      ev.value2 = r.normal_value;
      ev.fired = r.fired;
      break;
    }
    case StopKind::grak_native: {
      const auto r = grak_native_check(x, z, ref(sys_->x_star), ref(sys_->z_star), sys_->b, rule_.tol);
      ev.value = r.value;
      ev.fired = r.fired;
      break;
    }
    default: return std::nullopt;
  }
  trace_.push_back(ev);
  return ev;
}

}  // namespace kaczlab
