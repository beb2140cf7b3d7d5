// kaczlab: augmented Kaczmarz solvers for inconsistent linear systems.

#include <iostream>

#include "CLI11.hpp"
#include "kaczlab/commands.hpp"
#include "kaczlab/report.hpp"

namespace {

void problem_flags(CLI::App* sub, kaczlab::CliOptions& o) {
  sub->add_option("--matrix", o.matrix, "Matrix file: .mtx Matrix Market, otherwise dense text");
  sub->add_option("--gen", o.gen, "Generated matrix: gaussian:MxN or sparse:MxN:K");
  sub->add_option("--rhs", o.rhs, "Noise added to A x_seed: nullspace (orthogonal to range(A)) or randn")
      ->check(CLI::IsMember({"nullspace", "randn"}));
  sub->add_option("--noise-scale", o.noise_scale, "||noise|| / ||A x_seed||")->capture_default_str();
}

void run_flags(CLI::App* sub, kaczlab::CliOptions& o) {
  sub->add_option("--engine", o.engines, "Engines: rek, grak, agrak, sampled (comma separated)")->delimiter(',');
  sub->add_option("--eta", o.eta, "Sampling ratio of the sampled engine")->capture_default_str();
  sub->add_option("--stop", o.stop, "Stopping rule: none, lise, rse, ase, rres, aise, rek-native, grak-native")
      ->capture_default_str();
  sub->add_option("--tol", o.tol, "Stopping tolerance")->capture_default_str();
  sub->add_option("--window-L", o.window, "LISE window length L")->capture_default_str();
  sub->add_option("--max-iters", o.max_iters, "Iteration cap per run")->capture_default_str();
  sub->add_option("--seed", o.seed, "Seed for the problem and the first run")->capture_default_str();
  sub->add_option("--rse-every", o.rse_period, "Record RSE every N iterations (0 = off)");
  sub->add_option("--report", o.report, "Write the report here instead of stdout");
  sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_flag("--deterministic", o.deterministic, "Leave wall times out of JSON reports");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy augmented Kaczmarz solvers for inconsistent least-squares problems"};
  app.require_subcommand(1);
  app.footer(std::string("CSV columns: ") + kaczlab::csv_header +
             "\nExit codes: 2 flag error, 3 ingestion error, 4 oracle failure, 5 not converged.\n"
             "KACZLAB_CACHE sets the reference-solution cache directory.");

  kaczlab::CliOptions o;
  bool no_reference = false;

  auto* solve = app.add_subcommand("solve", "Run engines once on one system");
  problem_flags(solve, o);
  run_flags(solve, o);
  solve->add_flag("--bounds", o.bounds, "Append the convergence-rate bounds");
  solve->add_option("--trace", o.trace, "Write one line per step (k, branch, i, j, criterion)");
  solve->add_flag("--no-reference", no_reference, "Skip the least-squares oracle (no RSE)");

  auto* bench = app.add_subcommand("bench", "Compare engines over seeded repetitions");
  problem_flags(bench, o);
  run_flags(bench, o);
  bench->add_option("--reps", o.reps, "Repetitions per engine; run i uses seed + i")->capture_default_str();
  bench->add_flag("--bounds", o.bounds, "Append the convergence-rate bounds");
  bench->add_flag("--no-reference", no_reference, "Skip the least-squares oracle (no RSE)");

  kaczlab::CliOptions tomo_opts;
  tomo_opts.stop = "none";
  tomo_opts.max_iters = 20000;
  tomo_opts.reps = 1;
  auto* tomo = app.add_subcommand("tomo", "Parallel-beam tomography reconstruction");
  tomo->add_option("--N", tomo_opts.N, "Image is N x N pixels")->capture_default_str();
  tomo->add_option("--angles", tomo_opts.angles, "Degrees: a:step:b or a comma list")->capture_default_str();
  tomo->add_option("--p", tomo_opts.p, "Rays per angle (default ceil(125 N / 60))");
  tomo->add_option("--noise-scale", tomo_opts.noise_scale, "||noise|| / ||A x_true||")->capture_default_str();
  tomo->add_option("--reps", tomo_opts.reps, "Repetitions per engine")->capture_default_str();
  tomo->add_option("--images", tomo_opts.images, "Directory for exact and reconstructed PGM images");
  run_flags(tomo, tomo_opts);

  auto* gen = app.add_subcommand("gen", "Write a generated matrix in Matrix Market format");
  gen->add_option("--gen", o.gen, "gaussian:MxN or sparse:MxN:K")->required();
  gen->add_option("--seed", o.seed, "Seed")->capture_default_str();
  gen->add_option("--out", o.out, "Output path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kaczlab::exit_code::flag_error;
  }
  o.reference = !no_reference;

  if (solve->parsed()) return kaczlab::cmd_solve(o, std::cout, std::cerr);
  if (bench->parsed()) return kaczlab::cmd_bench(o, std::cout, std::cerr);
  if (tomo->parsed()) return kaczlab::cmd_tomo(tomo_opts, std::cout, std::cerr);
  return kaczlab::cmd_gen(o, std::cout, std::cerr);
}
