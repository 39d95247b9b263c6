// Command-line front end: solve, verify and sweep fractional nonlocal
// thermistor problems described by a problem file.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fractherm/cli.hpp"

namespace {

void add_run_flags(CLI::App& cmd, fractherm::cli::RunOptions& o) {
  cmd.add_option("problem", o.problem_file, "Problem definition file")->required();
  cmd.add_option("--mesh-n", o.mesh_n, "Number of subintervals (overrides mesh.n)");
  cmd.add_option("--mesh-grading", o.mesh_grading, "Grading exponent r >= 1 (overrides mesh.grading)");
  cmd.add_option("--N", o.N, "Weight parameter of the norm, or 'auto'");
  cmd.add_option("--tol", o.tol, "Stopping tolerance in the weighted norm");
  cmd.add_option("--max-iter", o.max_iter, "Iteration cap");
  cmd.add_option("--initial-guess", o.initial_guess, "zero | rhs-integral");
  cmd.add_option("--seed", o.seed, "Seed for randomized checks");
  cmd.add_option("--out", o.out_dir, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = fractherm::cli;
  CLI::App app{"fractherm: fractional nonlocal thermistor solver and verifier"};
  app.set_version_flag("--version", std::string(fractherm::kVersion));
  app.require_subcommand(1);

  cli::RunOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Picard solve; writes solution.csv and report.txt");
  add_run_flags(*solve_cmd, solve);

  cli::VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the certification checks");
  add_run_flags(*verify_cmd, verify);
  verify_cmd->add_option("--checks", verify.checks, "residual,bound,initial,contraction")->delimiter(',');
  verify_cmd->add_option("--load-solution", verify.load_solution, "Check this solution CSV instead of solving");
  verify_cmd->add_option("--trials", verify.trials, "Random pairs for the contraction check");
  verify_cmd->add_option("--levels", verify.levels, "Mesh levels for the residual decay check");

  cli::SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Solve over a lambda grid; writes sweep.csv");
  add_run_flags(*sweep_cmd, sweep);
  sweep_cmd->add_option("--lambda-grid", sweep.lambda_grid, "start:stop:count")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInputError;
  }

  if (*solve_cmd) return cli::run_solve(solve, std::cout, std::cerr);
  if (*verify_cmd) return cli::run_verify(verify, std::cout, std::cerr);
  return cli::run_sweep(sweep, std::cout, std::cerr);
}
