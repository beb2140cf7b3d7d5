#include "kaczlab/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "kaczlab/diagnostics.hpp"
#include "kaczlab/matrix_market.hpp"
#include "kaczlab/report.hpp"
#include "kaczlab/rng.hpp"
#include "kaczlab/solvers.hpp"
#include "kaczlab/tomo.hpp"

namespace kaczlab {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_ratio:
    case ErrorCode::window_not_ready:
    case ErrorCode::index_out_of_range: return exit_code::flag_error;
    case ErrorCode::oracle_not_converged:
    case ErrorCode::oracle_unavailable:
    case ErrorCode::reference_unavailable: return exit_code::oracle;
    default: return exit_code::ingestion;
  }
}

namespace {

namespace fs = std::filesystem;

struct GenSpec {
  std::string kind;
  std::size_t m = 0, n = 0, per_row = 0;
};

GenSpec parse_gen(const std::string& text) {
  GenSpec g;
  const auto bad = [&] {
    return Error(ErrorCode::invalid_argument, "--gen expects gaussian:MxN or sparse:MxN:K, got '" + text + "'");
  };
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw bad();
  g.kind = text.substr(0, colon);
  std::string dims = text.substr(colon + 1);
  if (g.kind == "sparse") {
    const auto c2 = dims.find(':');
    if (c2 == std::string::npos) throw bad();
    try {
      g.per_row = std::stoul(dims.substr(c2 + 1));
    } catch (const std::exception&) {
      throw bad();
    }
    dims = dims.substr(0, c2);
  } else if (g.kind != "gaussian") {
    throw bad();
  }
  const auto x = dims.find('x');
  if (x == std::string::npos) throw bad();
  try {
    std::size_t used = 0;
    g.m = std::stoul(dims.substr(0, x), &used);
    if (used != x) throw bad();
    const std::string ns = dims.substr(x + 1);
    g.n = std::stoul(ns, &used);
    if (used != ns.size()) throw bad();
  } catch (const std::invalid_argument&) {
    throw bad();
  } catch (const std::out_of_range&) {
    throw bad();
  }
  if (g.m == 0 || g.n == 0) throw bad();
  return g;
}

RowColMatrix load_matrix(const CliOptions& o, std::string& origin) {
  if (!o.matrix.empty() && !o.gen.empty()) throw Error(ErrorCode::invalid_argument, "use either --matrix or --gen");
  if (!o.matrix.empty()) {
    if (!fs::exists(o.matrix)) throw Error(ErrorCode::io_error, "cannot open '" + o.matrix + "'");
    origin = "file " + o.matrix;
    const auto ext = fs::path(o.matrix).extension().string();
    return ext == ".mtx" ? read_matrix_market(o.matrix) : read_dense_text(o.matrix);
  }
  if (o.gen.empty()) throw Error(ErrorCode::invalid_argument, "a problem is required: --matrix PATH or --gen SPEC");
  const auto g = parse_gen(o.gen);
  origin = "gen " + o.gen + " seed=" + std::to_string(o.seed);
  return g.kind == "gaussian" ? gen_gaussian(g.m, g.n, o.seed) : gen_sparse(g.m, g.n, g.per_row, o.seed);
}

RhsMode parse_rhs(const std::string& s) {
  if (s == "nullspace") return RhsMode::nullspace;
  if (s == "randn") return RhsMode::randn;
  throw Error(ErrorCode::invalid_argument, "--rhs expects nullspace or randn");
}

Vector make_rhs(const RowColMatrix& a, std::span<const double> x_seed, const CliOptions& o) {
  return parse_rhs(o.rhs) == RhsMode::nullspace ? build_inconsistent_rhs(a, x_seed, o.seed, o.noise_scale)
                                                : build_randn_rhs(a, x_seed, o.seed, o.noise_scale);
}

StoppingRule make_rule(const CliOptions& o) {
  StoppingRule r;
  r.kind = parse_stop_kind(o.stop);
  r.tol = o.tol;
  r.window = o.window;
  validate(r);
  return r;
}

bool rule_needs_reference(StopKind k) {
  return k == StopKind::rse || k == StopKind::ase || k == StopKind::grak_native;
}

std::vector<Engine> engine_list(const CliOptions& o, const std::vector<std::string>& fallback) {
  std::vector<Engine> out;
  for (const auto& name : o.engines.empty() ? fallback : o.engines) out.push_back(parse_engine(name));
  return out;
}

// ---------------------------------------------------------------------------
// oracle cache

fs::path cache_dir() {
  if (const char* env = std::getenv("KACZLAB_CACHE"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "kaczlab";
  return {};
}

constexpr char cache_magic[8] = {'K', 'Z', 'R', 'E', 'F', '0', '0', '1'};

bool read_cached(const fs::path& file, std::size_t m, std::size_t n, ReferenceSolution& ref) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return false;
  char magic[8];
  std::uint64_t dims[2];
  double tol = 0.0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(dims), sizeof dims);
  in.read(reinterpret_cast<char*>(&tol), sizeof tol);
  if (!in || std::string(magic, 8) != std::string(cache_magic, 8) || dims[0] != m || dims[1] != n ||
      tol != default_oracle_tol)
    return false;
  ref.x_star.resize(n);
  ref.z_star.resize(m);
  in.read(reinterpret_cast<char*>(ref.x_star.data()), static_cast<std::streamsize>(n * sizeof(double)));
  in.read(reinterpret_cast<char*>(ref.z_star.data()), static_cast<std::streamsize>(m * sizeof(double)));
  return static_cast<bool>(in);
}

void write_cached(const fs::path& file, const ReferenceSolution& ref) {
  std::error_code ec;
  fs::create_directories(file.parent_path(), ec);
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) return;
    const std::uint64_t dims[2] = {ref.z_star.size(), ref.x_star.size()};
    const double tol = default_oracle_tol;
    out.write(cache_magic, 8);
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    out.write(reinterpret_cast<const char*>(&tol), sizeof tol);
    out.write(reinterpret_cast<const char*>(ref.x_star.data()),
              static_cast<std::streamsize>(ref.x_star.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(ref.z_star.data()),
              static_cast<std::streamsize>(ref.z_star.size() * sizeof(double)));
    if (!out) return;
  }
  fs::rename(tmp, file, ec);
}

// ---------------------------------------------------------------------------

struct Sink {
  std::ofstream file;
  std::ostream* os;
  Sink(const std::string& path, std::ostream& fallback) : os(&fallback) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw Error(ErrorCode::io_error, "cannot write report '" + path + "'");
    os = &file;
  }
};

void check_format(const std::string& f) {
  if (f != "csv" && f != "json") throw Error(ErrorCode::invalid_argument, "--format expects csv or json");
}

RunReport failed_report(const PreparedSystem& ps, Engine e, std::uint64_t seed, const std::string& what) {
  RunReport r;
  r.engine = to_string(e);
  r.provenance = ps.system().provenance;
  r.m = ps.rows();
  r.n = ps.cols();
  r.nnz = ps.mat().nnz();
  r.seed = seed;
  r.status = RunStatus::failed;
  r.error = what;
  return r;
}

// Runs every engine `reps` times with seeds seed + i; errors become failed reports.
std::vector<std::vector<RunOutput>> run_matrix(const PreparedSystem& ps, const std::vector<Engine>& engines,
                                               const CliOptions& o, const StoppingRule& rule, std::size_t reps,
                                               std::ostream& err) {
  std::vector<std::vector<RunOutput>> all;
  for (Engine e : engines) {
    auto& runs = all.emplace_back();
    for (std::size_t r = 0; r < reps; ++r) {
      RunConfig cfg;
      cfg.engine = e;
      cfg.stop = rule;
      cfg.max_iters = o.max_iters;
      cfg.seed = o.seed + r;
      cfg.eta_s = o.eta;
      cfg.rse_period = o.rse_period;
      try {
        runs.push_back(run(ps, cfg));
      } catch (const Error& ex) {
        err << "kaczlab: " << to_string(e) << " seed " << cfg.seed << ": " << ex.what() << '\n';
        RunOutput f;
        f.report = failed_report(ps, e, cfg.seed, ex.what());
        runs.push_back(std::move(f));
      }
    }
  }
  return all;
}

void add_speedups(std::vector<BenchRow>& rows) {
  const BenchRow* grak = nullptr;
  for (const auto& r : rows)
    if (r.engine == "grak") grak = &r;
  if (!grak || grak->failed == grak->runs || !(grak->cpu_mean > 0.0)) return;
  for (auto& r : rows)
    if (r.failed < r.runs && r.cpu_mean > 0.0) r.speedup_vs_grak = grak->cpu_mean / r.cpu_mean;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "kaczlab: " << e.what() << " [" << to_string(e.code()) << "]\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "kaczlab: " << e.what() << '\n';
    return exit_code::ingestion;
  }
}

}  // namespace

LinearSystem assemble_system(const CliOptions& o) {
  std::string origin;
  RowColMatrix a = load_matrix(o, origin);
  const Vector x_seed = gen_gaussian_vector(a.cols(), o.seed, streams::solution);
  Vector b = make_rhs(a, x_seed, o);
  origin += " rhs=" + o.rhs + " noise=" + std::to_string(o.noise_scale);
  return LinearSystem(std::move(a), std::move(b), origin);
}

void attach_cached_reference(LinearSystem& sys) {
  const fs::path dir = cache_dir();
  char name[40];
  std::snprintf(name, sizeof name, "ref-%016llx.bin", static_cast<unsigned long long>(content_hash(sys.mat, sys.b)));
  ReferenceSolution ref;
  if (!dir.empty() && read_cached(dir / name, sys.rows(), sys.cols(), ref)) {
    sys.x_star = std::move(ref.x_star);
    sys.z_star = std::move(ref.z_star);
    return;
  }
  ref = reference_solution(sys.mat, sys.b);
  if (!dir.empty()) write_cached(dir / name, ref);
  sys.x_star = std::move(ref.x_star);
  sys.z_star = std::move(ref.z_star);
}

int cmd_solve(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_format(o.format);
    const StoppingRule rule = make_rule(o);
    const auto engines = engine_list(o, {"agrak"});
    if (!o.trace.empty() && engines.size() != 1)
      throw Error(ErrorCode::invalid_argument, "--trace needs exactly one engine");

    LinearSystem sys = assemble_system(o);
    if (o.reference || rule_needs_reference(rule.kind)) attach_cached_reference(sys);
    std::optional<BoundReport> bounds;
    if (o.bounds) bounds = compute_bounds(sys.mat);
    const PreparedSystem ps(sys);

    std::ofstream trace;
    if (!o.trace.empty()) {
      trace.open(o.trace);
      if (!trace) throw Error(ErrorCode::io_error, "cannot write trace '" + o.trace + "'");
    }

    std::vector<RunReport> reports;
    bool unconverged = false;
    for (Engine e : engines) {
      RunConfig cfg;
      cfg.engine = e;
      cfg.stop = rule;
      cfg.max_iters = o.max_iters;
      cfg.seed = o.seed;
      cfg.eta_s = o.eta;
      cfg.rse_period = o.rse_period;
      cfg.trace = trace.is_open() ? &trace : nullptr;
      auto res = run(ps, cfg);
      res.report.bounds = bounds;
      if (!res.report.completed() && rule.kind != StopKind::none) unconverged = true;
      reports.push_back(std::move(res.report));
    }

    Sink sink(o.report, out);
    if (o.format == "json") {
      if (reports.size() == 1)
        *sink.os << to_json_text(reports.front(), !o.deterministic) << '\n';
      else
        *sink.os << to_json_text(reports, std::span<const BenchRow>{}, !o.deterministic) << '\n';
    } else {
      std::optional<double> grak_cpu;
      for (const auto& r : reports)
        if (r.engine == "grak" && r.completed()) grak_cpu = r.wall_seconds;
      *sink.os << csv_header << '\n';
      for (const auto& r : reports) {
        std::optional<double> sp;
        if (grak_cpu && r.completed() && r.wall_seconds > 0.0) sp = *grak_cpu / r.wall_seconds;
        *sink.os << csv_row(r, sp) << '\n';
      }
      if (bounds) write_bounds_csv(*sink.os, *bounds);
    }
    if (unconverged) {
      err << "kaczlab: run stopped at --max-iters " << o.max_iters << " before the stopping rule fired\n";
      return exit_code::not_converged;
    }
    return exit_code::ok;
  });
}

int cmd_bench(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_format(o.format);
    if (o.reps == 0) throw Error(ErrorCode::invalid_argument, "--reps must be at least 1");
    const StoppingRule rule = make_rule(o);
    const auto engines = engine_list(o, {"rek", "grak", "agrak", "sampled"});

    LinearSystem sys = assemble_system(o);
    if (o.reference || rule_needs_reference(rule.kind)) attach_cached_reference(sys);
    std::optional<BoundReport> bounds;
    if (o.bounds) bounds = compute_bounds(sys.mat);
    const PreparedSystem ps(sys);

    const auto all = run_matrix(ps, engines, o, rule, o.reps, err);
    std::vector<RunReport> reports;
    std::vector<BenchRow> rows;
    for (const auto& runs : all) {
      std::vector<RunReport> reps;
      for (const auto& r : runs) reps.push_back(r.report);
      rows.push_back(summarize(reps));
      for (auto& r : reps) {
        r.bounds = bounds;
        reports.push_back(std::move(r));
      }
    }
    add_speedups(rows);

    Sink sink(o.report, out);
    if (o.format == "json") {
      *sink.os << to_json_text(reports, rows, !o.deterministic) << '\n';
    } else {
      *sink.os << csv_header << '\n';
      for (const auto& r : rows) *sink.os << csv_row(r) << '\n';
      if (bounds) write_bounds_csv(*sink.os, *bounds);
    }
    return exit_code::ok;
  });
}

int cmd_tomo(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_format(o.format);
    if (o.reps == 0) throw Error(ErrorCode::invalid_argument, "--reps must be at least 1");
    const StoppingRule rule = make_rule(o);
    const auto engines = engine_list(o, {"rek", "grak", "agrak", "sampled"});

    TomoSpec spec;
    spec.N = o.N;
    spec.angles = parse_angles(o.angles);
    spec.p = o.p ? o.p : static_cast<std::size_t>(std::ceil(static_cast<double>(o.N) * 125.0 / 60.0));
    TomoProblem tp = gen_paralleltomo(spec);
    Vector b = build_inconsistent_rhs(tp.mat, tp.x_true, o.seed, o.noise_scale);
    std::ostringstream origin;
    origin << "tomo N=" << spec.N << " angles=" << o.angles << " p=" << spec.p << " noise=" << o.noise_scale
           << " seed=" << o.seed;
    LinearSystem sys(std::move(tp.mat), std::move(b), origin.str());
    if (rule_needs_reference(rule.kind)) attach_cached_reference(sys);
    const PreparedSystem ps(sys);
    err << "kaczlab: tomography system " << sys.rows() << "x" << sys.cols() << " (" << tp.dropped_rows
        << " empty rays dropped)\n";

    auto all = run_matrix(ps, engines, o, rule, o.reps, err);
    std::vector<RunReport> reports;
    std::vector<BenchRow> rows;
    for (auto& runs : all) {
      std::vector<RunReport> reps;
      for (auto& r : runs) {
        if (r.report.status != RunStatus::failed) r.report.snr = snr(tp.x_true, r.x);
        reps.push_back(r.report);
      }
      rows.push_back(summarize(reps));
      for (auto& r : reps) reports.push_back(std::move(r));
    }
    add_speedups(rows);

    if (!o.images.empty()) {
      fs::create_directories(o.images);
      write_pgm((fs::path(o.images) / "exact.pgm").string(), tp.x_true, spec.N);
      for (std::size_t e = 0; e < engines.size(); ++e) {
        if (all[e].front().report.status == RunStatus::failed) continue;
        write_pgm((fs::path(o.images) / (std::string(to_string(engines[e])) + ".pgm")).string(), all[e].front().x,
                  spec.N);
      }
    }

    Sink sink(o.report, out);
    if (o.format == "json") {
      *sink.os << to_json_text(reports, rows, !o.deterministic) << '\n';
    } else {
      *sink.os << csv_header << '\n';
      for (const auto& r : rows) *sink.os << csv_row(r) << '\n';
    }
    return exit_code::ok;
  });
}

int cmd_gen(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.gen.empty()) throw Error(ErrorCode::invalid_argument, "gen needs --gen SPEC");
    std::string origin;
    const RowColMatrix a = load_matrix(o, origin);
    if (o.out.empty())
      write_matrix_market(out, a);
    else
      write_matrix_market(o.out, a);
    return exit_code::ok;
  });
}

}  // namespace kaczlab
