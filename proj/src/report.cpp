#include "kaczlab/report.hpp"

#include <cstdio>
#include "json.hpp"
#include <sstream>

namespace kaczlab {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::rule_fired: return "rule_fired";
    case RunStatus::converged: return "converged";
    case RunStatus::max_iters: return "max_iters";
    case RunStatus::failed: return "failed";
  }
  return "?";
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

nlohmann::json bounds_json(const BoundReport& b) {
  return {{"lambda_min", b.lambda_min}, {"eta", b.eta},     {"gamma", b.gamma},
          {"beta", b.beta},             {"zeta", b.zeta},   {"beta_tilde", b.beta_tilde},
          {"alpha", b.alpha},           {"delta", b.delta}, {"theta_bracket", {b.theta_bracket.first, b.theta_bracket.second}}};
}

nlohmann::json run_json(const RunReport& r, bool with_wall_time) {
  nlohmann::json j;
  j["engine"] = r.engine;
  j["provenance"] = r.provenance;
  j["m"] = r.m;
  j["n"] = r.n;
  j["nnz"] = r.nnz;
  j["seed"] = r.seed;
  j["stream_id"] = r.stream_id;
  if (r.eta_s) j["eta_s"] = *r.eta_s;
  j["stop"] = {{"rule", r.stop_rule}, {"tol", r.tol}, {"window", r.window}};
  j["max_iters"] = r.max_iters;
  j["IT"] = r.iterations;
  if (with_wall_time) j["CPU_s"] = r.wall_seconds;
  j["status"] = to_string(r.status);
  if (!r.error.empty()) j["error"] = r.error;
  if (r.final_rse) j["RSE"] = *r.final_rse;
  if (r.snr) j["SNR"] = *r.snr;
  j["branches"] = {{"row", r.branches.row}, {"column", r.branches.column}, {"both", r.branches.both}};
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.iterate_hash));
  j["iterate_hash"] = hash;
  auto& tr = j["stop_trace"] = nlohmann::json::array();
  for (const auto& e : r.stop_trace) {
    nlohmann::json ej = {{"k", e.k}, {"value", e.value}, {"fired", e.fired}};
    if (r.stop_rule == "rek-native") ej["value2"] = e.value2;
    tr.push_back(std::move(ej));
  }
  auto& hist = j["rse_history"] = nlohmann::json::array();
  for (const auto& [k, v] : r.rse_history) hist.push_back({k, v});
  if (r.bounds) j["bounds"] = bounds_json(*r.bounds);
  return j;
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

std::string csv_row(const RunReport& r, std::optional<double> speedup_vs_grak) {
  std::ostringstream os;
  os << r.engine << ',' << r.m << ',' << r.n << ',' << r.nnz << ',' << r.seed << ',' << r.iterations << ','
     << num(r.wall_seconds) << ',' << opt(r.final_rse) << ',' << opt(r.snr) << ',' << opt(speedup_vs_grak);
  return os.str();
}

BenchRow summarize(std::span<const RunReport> reps) {
  BenchRow row;
  if (reps.empty()) return row;
  const RunReport& first = reps.front();
  row.engine = first.engine;
  row.m = first.m;
  row.n = first.n;
  row.nnz = first.nnz;
  row.seed = first.seed;
  row.runs = reps.size();

  std::size_t used = 0;
  for (const auto& r : reps) used += r.completed() ? 1 : 0;
  const bool only_completed = used > 0;
  row.failed = reps.size() - used;

  double it = 0.0, cpu = 0.0, rse = 0.0, snr = 0.0;
  std::size_t cnt = 0, rse_cnt = 0, snr_cnt = 0;
  for (const auto& r : reps) {
    if (only_completed && !r.completed()) continue;
    ++cnt;
    it += static_cast<double>(r.iterations);
    cpu += r.wall_seconds;
    if (r.final_rse) {
      rse += *r.final_rse;
      ++rse_cnt;
    }
    if (r.snr) {
      snr += *r.snr;
      ++snr_cnt;
    }
  }
  row.it_mean = it / static_cast<double>(cnt);
  row.cpu_mean = cpu / static_cast<double>(cnt);
  if (rse_cnt) row.rse_mean = rse / static_cast<double>(rse_cnt);
  if (snr_cnt) row.snr_mean = snr / static_cast<double>(snr_cnt);
  return row;
}

std::string csv_row(const BenchRow& r) {
  std::ostringstream os;
  os << r.engine << ',' << r.m << ',' << r.n << ',' << r.nnz << ',' << r.seed << ',' << num(r.it_mean) << ','
     << num(r.cpu_mean) << ',' << opt(r.rse_mean) << ',' << opt(r.snr_mean) << ',' << opt(r.speedup_vs_grak);
  return os.str();
}

void write_bounds_csv(std::ostream& os, const BoundReport& b) {
  os << "# bounds\nquantity,value\n";
  os << "lambda_min," << num(b.lambda_min) << "\neta," << num(b.eta) << "\ngamma," << num(b.gamma) << "\nbeta,"
     << num(b.beta) << "\nzeta," << num(b.zeta) << "\nbeta_tilde," << num(b.beta_tilde) << "\nalpha," << num(b.alpha)
     << "\ndelta," << num(b.delta) << '\n';
}

std::string to_json_text(const RunReport& r, bool with_wall_time) { return run_json(r, with_wall_time).dump(2); }

std::string to_json_text(std::span<const RunReport> runs, std::span<const BenchRow> rows, bool with_wall_time) {
  nlohmann::json j;
  auto& rj = j["runs"] = nlohmann::json::array();
  for (const auto& r : runs) rj.push_back(run_json(r, with_wall_time));
  auto& tj = j["summary"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json e = {{"engine", r.engine}, {"m", r.m},           {"n", r.n},
                        {"nnz", r.nnz},       {"seed", r.seed},     {"runs", r.runs},
                        {"failed", r.failed}, {"IT", r.it_mean},    {"RSE", optional_json(r.rse_mean)},
                        {"SNR", optional_json(r.snr_mean)},         {"speedup_vs_grak", optional_json(r.speedup_vs_grak)}};
    if (with_wall_time) e["CPU_s"] = r.cpu_mean;
    tj.push_back(std::move(e));
  }
  return j.dump(2);
}

std::uint64_t iterate_hash(std::span<const double> z, std::span<const double> x) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::span<const double> v) {
    const auto* p = reinterpret_cast<const unsigned char*>(v.data());
    for (std::size_t k = 0; k < v.size() * sizeof(double); ++k) {
      h ^= p[k];
      h *= 0x100000001b3ULL;
    }
  };
  mix(z);
  mix(x);
  return h;
}

}  // namespace kaczlab
