#include "kaczlab/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "kaczlab/error.hpp"

namespace kaczlab {

const char* to_string(Engine e) {
  switch (e) {
    case Engine::rek: return "rek";
    case Engine::grak: return "grak";
    case Engine::agrak: return "agrak";
    case Engine::sampled: return "sampled";
  }
  return "?";
}

Engine parse_engine(const std::string& name) {
  for (Engine e : {Engine::rek, Engine::grak, Engine::agrak, Engine::sampled})
    if (name == to_string(e)) return e;
  throw Error(ErrorCode::invalid_argument, "unknown engine '" + name + "' (expected rek, grak, agrak or sampled)");
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::row: return "row";
    case Branch::column: return "column";
    case Branch::both: return "both";
    case Branch::converged: return "converged";
  }
  return "?";
}

PreparedSystem::PreparedSystem(const LinearSystem& sys)
    : sys_(&sys),
      rows_(WeightedSampler::rows(sys.mat)),
      cols_(WeightedSampler::columns(sys.mat)),
      aug_frob_sq_(static_cast<double>(sys.rows()) + 2.0 * sys.mat.frob_sq()) {}

SolverState init_state(const PreparedSystem& ps, std::uint64_t seed, std::uint64_t stream_id) {
  SolverState st(seed, stream_id);
  st.x.assign(ps.cols(), 0.0);
  st.z.assign(ps.b().begin(), ps.b().end());
  return st;
}

SolverState init_state(const PreparedSystem& ps, std::span<const double> x0, std::uint64_t seed,
                       std::uint64_t stream_id) {
  if (x0.size() != ps.cols()) throw Error(ErrorCode::invalid_argument, "x0 has wrong length");
  require_finite(x0, "x0");
  SolverState st = init_state(ps, seed, stream_id);
  st.x.assign(x0.begin(), x0.end());
  return st;
}

namespace {

inline double row_residual(const PreparedSystem& ps, const SolverState& st, std::size_t i) {
  return ps.b()[i] - st.z[i] - ps.mat().row_dot(i, st.x);
}

inline double col_residual(const PreparedSystem& ps, const SolverState& st, std::size_t j) {
  return ps.mat().col_dot(j, st.z);
}

void fresh_residuals(const SolverState& st, const PreparedSystem& ps, Vector& rr, Vector& rc) {
  const std::size_t m = ps.rows(), n = ps.cols();
  rr.resize(m);
  rc.resize(n);
  for (std::size_t i = 0; i < m; ++i) rr[i] = row_residual(ps, st, i);
  for (std::size_t j = 0; j < n; ++j) rc[j] = col_residual(ps, st, j);
}

void ensure_cache(SolverState& st, const PreparedSystem& ps) {
  if (!st.cache_valid || st.since_refresh >= cache_refresh_period) refresh_residuals(st, ps);
}

// res_row -= coef * A (A^(i))^H
void cache_sub_row_image(SolverState& st, const RowColMatrix& a, std::size_t i, double coef) {
  a.row(i).for_each([&](std::size_t j, double v) {
    if (v != 0.0) a.col_axpy(j, -coef * v, st.res_row);
  });
}

// Augmented row i: z_i += d, x += d (A^(i))^H.
void apply_row_branch(SolverState& st, const PreparedSystem& ps, std::size_t i, double r_i, bool cached) {
  const auto& a = ps.mat();
  const double d = r_i / (1.0 + a.row_norm_sq(i));
  st.z[i] += d;
  a.row_axpy(i, d, st.x);
  if (cached) {
    st.res_row[i] -= d;
    cache_sub_row_image(st, a, i, d);
    a.row_axpy(i, d, st.res_col);
  }
}

// Augmented row m + j: z -= mu A_(j).
void apply_column_z(SolverState& st, const PreparedSystem& ps, std::size_t j, double g_j, bool cached) {
  const auto& a = ps.mat();
  const double mu = g_j / a.col_norm_sq(j);
  a.col_axpy(j, -mu, st.z);
  if (cached) {
    a.col_axpy(j, mu, st.res_row);
    a.col(j).for_each([&](std::size_t i, double v) {
      if (v != 0.0) a.row_axpy(i, -mu * v, st.res_col);
    });
  }
}

// x += ((b_i - z_i - A^(i) x) / ||A^(i)||^2) (A^(i))^H with i drawn by row norm.
std::size_t refresh_x(SolverState& st, const PreparedSystem& ps, bool cached) {
  const auto& a = ps.mat();
  const std::size_t i = ps.row_sampler().draw(st.rng);
  const double w = row_residual(ps, st, i) / a.row_norm_sq(i);
  a.row_axpy(i, w, st.x);
  if (cached) cache_sub_row_image(st, a, i, w);
  return i;
}

struct CriteriaScan {
  double sum_row = 0.0, sum_col = 0.0;
  double max_row = 0.0, max_col = 0.0;
  std::size_t arg_row = no_index, arg_col = no_index;
};

// Fills crit_row / crit_col with the squared criteria; first maximum wins.
CriteriaScan scan_criteria(const PreparedSystem& ps, std::span<const double> rr, std::span<const double> rc,
                           std::span<double> crit_row, std::span<double> crit_col) {
  const auto& a = ps.mat();
  CriteriaScan s;
  for (std::size_t i = 0; i < rr.size(); ++i) {
    const double r2 = rr[i] * rr[i];
    const double c = r2 / (1.0 + a.row_norm_sq(i));
    crit_row[i] = c;
    s.sum_row += r2;
    if (c > s.max_row) {
      s.max_row = c;
      s.arg_row = i;
    }
  }
  for (std::size_t j = 0; j < rc.size(); ++j) {
    const double g2 = rc[j] * rc[j];
    const double c = g2 / a.col_norm_sq(j);
    crit_col[j] = c;
    s.sum_col += g2;
    if (c > s.max_col) {
      s.max_col = c;
      s.arg_col = j;
    }
  }
  return s;
}

struct Thresholds {
  double total, eps_row, eps_col, eps, bar;
};

Thresholds thresholds(const CriteriaScan& s, double aug_frob_sq) {
  Thresholds t;
  t.total = s.sum_row + s.sum_col;
  t.eps_row = 0.5 * (s.max_row / t.total + 1.0 / aug_frob_sq);
  t.eps_col = 0.5 * (s.max_col / t.total + 1.0 / aug_frob_sq);
  t.eps = std::max(t.eps_row, t.eps_col);
  t.bar = t.eps * t.total;
  return t;
}

// Overall argmax, rows before columns on ties; t < m rows, m + j columns.
std::size_t overall_argmax(const CriteriaScan& s, std::size_t m) {
  if (s.arg_col != no_index && s.max_col > s.max_row) return m + s.arg_col;
  return s.arg_row != no_index ? s.arg_row : m + s.arg_col;
}

StepOutcome converged() { return StepOutcome{}; }

// Shared AGRAK / sampled branch application for augmented index t.
StepOutcome apply_greedy_choice(SolverState& st, const PreparedSystem& ps, std::size_t t, double residual,
                                double criterion, bool cached) {
  const std::size_t m = ps.rows();
  StepOutcome out;
  out.criterion = criterion;
  if (t < m) {
    apply_row_branch(st, ps, t, residual, cached);
    out.branch = Branch::row;
    out.row = t;
  } else {
    const std::size_t j = t - m;
    apply_column_z(st, ps, j, residual, cached);
    out.branch = Branch::column;
    out.col = j;
    out.row = refresh_x(st, ps, cached);
  }
  ++st.k;
  if (cached) ++st.since_refresh;
  return out;
}

}  // namespace

void refresh_residuals(SolverState& st, const PreparedSystem& ps) {
  fresh_residuals(st, ps, st.res_row, st.res_col);
  st.cache_valid = true;
  st.since_refresh = 0;
}

Vector greedy_criteria(const SolverState& st, const PreparedSystem& ps) {
  const std::size_t m = ps.rows(), n = ps.cols();
  Vector rr, rc;
  fresh_residuals(st, ps, rr, rc);
  Vector crit(m + n);
  scan_criteria(ps, rr, rc, std::span(crit).first(m), std::span(crit).subspan(m));
  return crit;
}

// ---------------------------------------------------------------------------
// REK

StepOutcome rek_step_with(SolverState& st, const PreparedSystem& ps, std::size_t i, std::size_t j) {
  const auto& a = ps.mat();
  if (i >= ps.rows()) throw Error(ErrorCode::index_out_of_range, "REK row index out of range");
  if (j >= ps.cols()) throw Error(ErrorCode::index_out_of_range, "REK column index out of range");
  const double mu = a.col_dot(j, st.z) / a.col_norm_sq(j);
  a.col_axpy(j, -mu, st.z);
  const double w = row_residual(ps, st, i) / a.row_norm_sq(i);
  a.row_axpy(i, w, st.x);
  ++st.k;
  st.cache_valid = false;
  return StepOutcome{Branch::both, i, j, 0.0};
}

StepOutcome rek_step(SolverState& st, const PreparedSystem& ps) {
  const std::size_t i = ps.row_sampler().draw(st.rng);
  const std::size_t j = ps.col_sampler().draw(st.rng);
  return rek_step_with(st, ps, i, j);
}

// ---------------------------------------------------------------------------
// GRAK

GreedySelection grak_build_selection(const SolverState& st, const PreparedSystem& ps) {
  const std::size_t m = ps.rows(), n = ps.cols();
  GreedySelection sel;
  fresh_residuals(st, ps, sel.residual_row, sel.residual_col);
  Vector crit_row(m), crit_col(n);
  const auto scan = scan_criteria(ps, sel.residual_row, sel.residual_col, crit_row, crit_col);
  if (!(scan.sum_row + scan.sum_col > 0.0))
    throw Error(ErrorCode::zero_residual, "augmented residual is zero; nothing to select");
  const auto th = thresholds(scan, ps.aug_frob_sq());
  sel.total = th.total;
  sel.eps_row = th.eps_row;
  sel.eps_col = th.eps_col;
  sel.eps = th.eps;

  sel.r_tilde.assign(m, 0.0);
  sel.s_tilde.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (crit_row[i] >= th.bar) {
      sel.omega_row.push_back(i);
      sel.r_tilde[i] = sel.residual_row[i];
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (crit_col[j] >= th.bar) {
      sel.omega_col.push_back(j);
      sel.s_tilde[j] = -sel.residual_col[j];
    }
  }
  if (sel.omega_row.empty() && sel.omega_col.empty()) {
    // rounding can push every criterion under the bar when they are all equal
    const std::size_t t = overall_argmax(scan, m);
    if (t < m) {
      sel.omega_row.push_back(t);
      sel.r_tilde[t] = sel.residual_row[t];
    } else {
      sel.omega_col.push_back(t - m);
      sel.s_tilde[t - m] = -sel.residual_col[t - m];
    }
  }
  return sel;
}

StepOutcome grak_step(SolverState& st, const PreparedSystem& ps) {
  ensure_cache(st, ps);
  const std::size_t m = ps.rows(), n = ps.cols();
  st.scratch_row.resize(m);
  st.scratch_col.resize(n);
  const auto scan = scan_criteria(ps, st.res_row, st.res_col, st.scratch_row, st.scratch_col);
  if (!(scan.sum_row + scan.sum_col > 0.0)) return converged();
  const auto th = thresholds(scan, ps.aug_frob_sq());

  // same accumulation order as grak_residual_sample over grak_build_selection
  double mass = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (st.scratch_row[i] >= th.bar) mass += st.res_row[i] * st.res_row[i];
  for (std::size_t j = 0; j < n; ++j)
    if (st.scratch_col[j] >= th.bar) mass += st.res_col[j] * st.res_col[j];

  std::size_t t = no_index;
  if (mass > 0.0) {
    const double target = st.rng.uniform() * mass;
    double acc = 0.0;
    std::size_t last = no_index;
    for (std::size_t i = 0; i < m && t == no_index; ++i) {
      if (!(st.scratch_row[i] >= th.bar)) continue;
      const double w = st.res_row[i] * st.res_row[i];
      if (w == 0.0) continue;
      acc += w;
      last = i;
      if (target < acc) t = i;
    }
    for (std::size_t j = 0; j < n && t == no_index; ++j) {
      if (!(st.scratch_col[j] >= th.bar)) continue;
      const double w = st.res_col[j] * st.res_col[j];
      if (w == 0.0) continue;
      acc += w;
      last = m + j;
      if (target < acc) t = m + j;
    }
    if (t == no_index) t = last;
  } else {
    t = overall_argmax(scan, m);
  }

  StepOutcome out;
  if (t < m) {
    out.criterion = st.scratch_row[t];
    apply_row_branch(st, ps, t, row_residual(ps, st, t), true);
    out.branch = Branch::row;
    out.row = t;
  } else {
    const std::size_t j = t - m;
    out.criterion = st.scratch_col[j];
    apply_column_z(st, ps, j, col_residual(ps, st, j), true);
    out.branch = Branch::column;
    out.col = j;
  }
  ++st.k;
  ++st.since_refresh;
  return out;
}

// ---------------------------------------------------------------------------
// AGRAK

StepOutcome agrak_step(SolverState& st, const PreparedSystem& ps) {
  ensure_cache(st, ps);
  const std::size_t m = ps.rows(), n = ps.cols();
  st.scratch_row.resize(m);
  st.scratch_col.resize(n);
  const auto scan = scan_criteria(ps, st.res_row, st.res_col, st.scratch_row, st.scratch_col);
  if (!(std::max(scan.max_row, scan.max_col) > 0.0)) return converged();
  const std::size_t t = overall_argmax(scan, m);
  const double crit = t < m ? st.scratch_row[t] : st.scratch_col[t - m];
  const double res = t < m ? row_residual(ps, st, t) : col_residual(ps, st, t - m);
  return apply_greedy_choice(st, ps, t, res, crit, true);
}

// ---------------------------------------------------------------------------
// Simple random sampling

StepOutcome sampled_step(SolverState& st, const PreparedSystem& ps, double eta_s) {
  const std::size_t m = ps.rows(), n = ps.cols();
  const auto& a = ps.mat();
  const std::size_t want = subset_size(m, n, eta_s);
  if (!st.subset || st.subset->sample_size() != want) st.subset.emplace(m, n, eta_s);
  st.cache_valid = false;

  for (int attempt = 0; attempt < 2; ++attempt) {
    const SampleSubset& s = st.subset->draw(st.rng);
    double best = 0.0, best_res = 0.0;
    std::size_t best_t = no_index;
    for (std::size_t i : s.row_part()) {
      const double r = row_residual(ps, st, i);
      const double c = r * r / (1.0 + a.row_norm_sq(i));
      if (c > best) {
        best = c;
        best_res = r;
        best_t = i;
      }
    }
    for (std::size_t t : s.col_part()) {
      const double g = col_residual(ps, st, t - m);
      const double c = g * g / a.col_norm_sq(t - m);
      if (c > best) {
        best = c;
        best_res = g;
        best_t = t;
      }
    }
    if (best_t != no_index) return apply_greedy_choice(st, ps, best_t, best_res, best, false);
  }

  // zero criterion on two subsets: decide on the full residual
  Vector rr, rc;
  fresh_residuals(st, ps, rr, rc);
  st.scratch_row.resize(m);
  st.scratch_col.resize(n);
  const auto scan = scan_criteria(ps, rr, rc, st.scratch_row, st.scratch_col);
  if (!(std::max(scan.max_row, scan.max_col) > 0.0)) return converged();
  const std::size_t t = overall_argmax(scan, m);
  const double crit = t < m ? st.scratch_row[t] : st.scratch_col[t - m];
  return apply_greedy_choice(st, ps, t, t < m ? rr[t] : rc[t - m], crit, false);
}

StepOutcome step(Engine e, SolverState& st, const PreparedSystem& ps, double eta_s) {
  switch (e) {
    case Engine::rek: return rek_step(st, ps);
    case Engine::grak: return grak_step(st, ps);
    case Engine::agrak: return agrak_step(st, ps);
    case Engine::sampled: return sampled_step(st, ps, eta_s);
  }
  throw Error(ErrorCode::invalid_argument, "unknown engine");
}

// ---------------------------------------------------------------------------

namespace {

void write_trace_line(std::ostream& os, std::size_t k, const StepOutcome& o) {
  os << k << ',' << to_string(o.branch) << ',';
  if (o.row != no_index) os << o.row;
  os << ',';
  if (o.col != no_index) os << o.col;
  os << ',' << o.criterion << '\n';
}

}  // namespace

RunOutput run(const PreparedSystem& ps, const RunConfig& cfg) {
  const LinearSystem& sys = ps.system();
  if (cfg.engine == Engine::sampled) subset_size(ps.rows(), ps.cols(), cfg.eta_s);

  RunOutput out;
  RunReport& rep = out.report;
  rep.engine = to_string(cfg.engine);
  rep.provenance = sys.provenance;
  rep.m = ps.rows();
  rep.n = ps.cols();
  rep.nnz = ps.mat().nnz();
  rep.seed = cfg.seed;
  rep.stream_id = cfg.stream_id;
  if (cfg.engine == Engine::sampled) rep.eta_s = cfg.eta_s;
  rep.stop_rule = to_string(cfg.stop.kind);
  rep.tol = cfg.stop.tol;
  rep.window = cfg.stop.window;
  rep.max_iters = cfg.max_iters;

  StopMonitor monitor(cfg.stop, sys, cfg.engine != Engine::rek);
  SolverState st = init_state(ps, cfg.seed, cfg.stream_id);
  monitor.start(st.x, st.z);
  const bool track_rse = cfg.rse_period > 0 && sys.x_star.has_value();
  if (cfg.trace) *cfg.trace << "k,branch,i,j,criterion\n";

  RunStatus status = RunStatus::max_iters;
  const auto t0 = std::chrono::steady_clock::now();
  while (st.k < cfg.max_iters) {
    const StepOutcome o = step(cfg.engine, st, ps, cfg.eta_s);
    if (o.branch == Branch::converged) {
      status = RunStatus::converged;
      break;
    }
    switch (o.branch) {
      case Branch::row: ++rep.branches.row; break;
      case Branch::column: ++rep.branches.column; break;
      default: ++rep.branches.both; break;
    }
    if (cfg.trace) write_trace_line(*cfg.trace, st.k, o);
    if (cfg.keep_steps) out.steps.push_back(o);
    if (track_rse && st.k % cfg.rse_period == 0)
      rep.rse_history.emplace_back(st.k, rse_check(st.x, std::span<const double>(*sys.x_star), 1.0).value);
    const auto ev = monitor.observe(st.k, st.x, st.z);
    if (ev && ev->fired) {
      status = RunStatus::rule_fired;
      break;
    }
  }
  const auto t1 = std::chrono::steady_clock::now();

  rep.iterations = st.k;
  rep.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  rep.status = status;
  rep.stop_trace = monitor.trace();
  if (sys.x_star) rep.final_rse = rse_check(st.x, std::span<const double>(*sys.x_star), 1.0).value;
  rep.iterate_hash = iterate_hash(st.z, st.x);
  out.x = std::move(st.x);
  out.z = std::move(st.z);
  return out;
}

}  // namespace kaczlab
