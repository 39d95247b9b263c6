#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fractherm/io.hpp"
#include "fractherm/verify.hpp"

namespace fractherm::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kNotConverged = 2,
  kCheckFailed = 3,
};

struct RunOptions {
  std::string problem_file;
  std::optional<std::size_t> mesh_n;
  std::optional<double> mesh_grading;
  std::string N = "auto";
  double tol = 1e-10;
  int max_iter = 200;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string initial_guess = "zero";
};

struct VerifyOptions : RunOptions {
  std::vector<std::string> checks = {"residual", "bound", "initial", "contraction"};
  std::string load_solution;
  int trials = 32;
  int levels = 3;
};

struct SweepOptions : RunOptions {
  std::string lambda_grid;
};

/// Decision threshold of the residual check: interior residual must shrink
/// by at least this factor per mesh doubling.
inline constexpr double kResidualDecayRatio = 0.75;
/// Slack on the empirical contraction rate relative to q.
inline constexpr double kContractionSlack = 0.05;

namespace detail {

struct Setup {
  ProblemFile file;
  MeshPtr mesh;
  SolverOptions solver;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Setup prepare(const RunOptions& o) {
  if (o.problem_file.empty()) throw std::invalid_argument("no problem file given");
  ProblemFile file = [&] {
    try {
      return parse_problem(read_file(o.problem_file));
    } catch (const ParseError& e) {
      throw ParseError(0, o.problem_file + ": " + e.what());
    }
  }();
  if (o.mesh_n) {
    if (*o.mesh_n < 1) throw std::invalid_argument("--mesh-n must be >= 1");
    file.mesh_n = *o.mesh_n;
  }
  if (o.mesh_grading) file.mesh_grading = *o.mesh_grading;

  SolverOptions s;
  if (o.N != "auto") {
    const auto v = fractherm::detail::to_real(o.N);
    if (!v || !(*v > 0.0)) throw std::invalid_argument("--N expects 'auto' or a positive number");
    s.N = *v;
  }
  s.tol = o.tol;
  s.max_iter = o.max_iter;
  if (o.initial_guess == "zero") {
    s.initial_guess = InitialGuess::zero;
  } else if (o.initial_guess == "rhs-integral") {
    s.initial_guess = InitialGuess::rhs_integral;
  } else {
    throw std::invalid_argument("--initial-guess expects 'zero' or 'rhs-integral'");
  }
  s.validate();
  if (!s.N) s.N = choose_N(file.problem);
  MeshPtr mesh = make_mesh(file.problem.T, file.mesh_n, file.mesh_grading);
  return {std::move(file), std::move(mesh), s};
}

inline void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

inline void write_run_section(ReportWriter& w, std::string_view command, const RunOptions& o) {
  w.section("run")
      .field("command", command)
      .field("version", kVersion)
      .field("seed", std::to_string(o.seed))
      .field("tol", o.tol)
      .field("max_iter", o.max_iter);
}

/// Runs `body`, mapping input problems to exit code 1.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kInputError;
}

}  // namespace detail

/// `solve`: writes solution.csv and report.txt into out_dir.
/// Exit 0 when converged, 2 when not, 1 on bad input.
inline int run_solve(const RunOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto setup = detail::prepare(o);
    const SolveReport r = solve_picard(setup.file.problem, setup.mesh, setup.solver);

    ReportWriter w;
    w.comment("fractherm solve report");
    write_problem_section(w, setup.file);
    detail::write_run_section(w, "solve", o);
    write_solve_section(w, r);
    detail::write_file(o.out_dir, "solution.csv", solution_csv(r.u));
    detail::write_file(o.out_dir, "report.txt", w.str());

    out << (r.converged ? "converged" : "not converged") << " after " << r.iterations
        << " iterations; q = " << format_real(r.theoretical_q)
        << ", ||u||_N = " << format_real(r.weighted_norm_u) << '\n';
    return r.converged ? kOk : kNotConverged;
  });
}

/// `verify`: solves (or loads a solution) and runs the selected checks.
/// Exit 0 iff every enabled check passes, 3 when one fails, 2 when the
/// solve does not converge, 1 on bad input.
inline int run_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    bool want_residual = false, want_bound = false, want_initial = false, want_contraction = false;
    for (const auto& c : o.checks) {
      if (c == "residual") want_residual = true;
      else if (c == "bound") want_bound = true;
      else if (c == "initial") want_initial = true;
      else if (c == "contraction") want_contraction = true;
      else throw std::invalid_argument("unknown check '" + c + "'");
    }
    if (o.trials < 1) throw std::invalid_argument("--trials must be >= 1");
    if (o.levels < 2) throw std::invalid_argument("--levels must be >= 2");

    const auto setup = detail::prepare(o);
    const ThermistorProblem& p = setup.file.problem;
    const double N = *setup.solver.N;
    const WeightTable w2a = build_weights(setup.mesh, p.order.two_alpha());

    const bool loaded = !o.load_solution.empty();
    SolveReport r = solve_picard(p, w2a, setup.solver);
    std::optional<GridFunction> own;
    if (loaded) {
      std::ifstream in(o.load_solution);
      if (!in) throw std::invalid_argument("cannot open '" + o.load_solution + "'");
      const auto rows = read_solution_csv(in);
      if (rows.size() != setup.mesh->size()) {
        throw std::invalid_argument("loaded solution has " + std::to_string(rows.size()) +
                                    " rows, mesh has " + std::to_string(setup.mesh->size()) + " nodes");
      }
      std::vector<double> values(rows.size());
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (std::abs(rows[k].first - setup.mesh->node(k)) > 1e-12 * p.T) {
          throw std::invalid_argument("loaded solution row " + std::to_string(k + 1) +
                                      " does not sit on the mesh node");
        }
        values[k] = rows[k].second;
      }
      own = r.u;
      r.u = GridFunction(setup.mesh, std::move(values));
      r.converged = true;  // taken as given
      r.weighted_norm_u = weighted_norm(r.u, N);
    }

    ReportWriter w;
    w.comment("fractherm verification report");
    write_problem_section(w, setup.file);
    detail::write_run_section(w, "verify", o);
    w.field("solution", loaded ? "loaded" : "solved").field("trials", o.trials);
    if (!loaded) write_solve_section(w, r);

    if (!r.converged) {
      detail::write_file(o.out_dir, "verify_report.txt", w.str());
      out << "solve did not converge; checks skipped\n";
      return static_cast<int>(kNotConverged);
    }

    bool all_pass = true;
    if (want_residual) {
      const ResidualNorms norms = residual_norms(residual(p, r.u));
      w.section("residual")
          .field("sup", norms.sup)
          .field("l1", norms.l1)
          .field("interior_fraction", kDefaultInteriorFraction)
          .field("interior_sup", norms.interior_sup)
          .field("round_trip_sup", integrated_form_gap(p, r.u));
      bool pass = true;
      if (loaded) {
        const double reference = residual_norms(residual(p, *own)).interior_sup;
        pass = norms.interior_sup <= 10.0 * reference + 1e-12;
        w.field("reference_interior_sup", reference);
      } else {
        const auto levels = residual_refinement(p, setup.file.mesh_n, o.levels,
                                                setup.file.mesh_grading, setup.solver);
        std::vector<double> ns, sups, ratios;
        for (const auto& l : levels) {
          ns.push_back(static_cast<double>(l.n));
          sups.push_back(l.norms.interior_sup);
          if (!std::isnan(l.ratio)) {
            ratios.push_back(l.ratio);
            pass = pass && l.converged && l.ratio <= kResidualDecayRatio;
          }
        }
        w.field("refinement_n", format_list(ns))
            .field("refinement_interior_sup", format_list(sups))
            .field("refinement_ratios", format_list(ratios))
            .field("max_ratio", kResidualDecayRatio);
      }
      w.field("pass", pass);
      all_pass = all_pass && pass;
    }
    if (want_bound) {
      const bool pass = bound_check(r, p, N);
      w.section("bound")
          .field("weighted_norm_u", weighted_norm(r.u, N))
          .field("apriori_bound", apriori_bound(p, N))
          .field("pass", pass);
      all_pass = all_pass && pass;
    }
    if (want_initial) {
      const auto ic = check_initial_condition(r.u);
      w.section("initial_condition");
      for (const auto& v : ic.values) {
        char prefix[32];
        std::snprintf(prefix, sizeof prefix, "beta_%g", v.beta);
        w.field(std::string(prefix) + ".value", v.value).field(std::string(prefix) + ".limit", v.limit);
      }
      w.field("pass", ic.pass);
      all_pass = all_pass && ic.pass;
    }
    if (want_contraction) {
      const double rate = empirical_contraction_rate(p, N, w2a, o.trials, o.seed);
      const double q = contraction_constant(p, N);
      const bool pass = rate <= q * (1.0 + kContractionSlack);
      w.section("contraction")
          .field("N", N)
          .field("theoretical_q", q)
          .field("empirical_rate", rate)
          .field("seed", std::to_string(o.seed))
          .field("pass", pass);
      all_pass = all_pass && pass;
    }
    w.section("summary").field("pass", all_pass);
    detail::write_file(o.out_dir, "verify_report.txt", w.str());
    out << (all_pass ? "all checks passed" : "verification FAILED") << '\n';
    return static_cast<int>(all_pass ? kOk : kCheckFailed);
  });
}

/// Parses "start:stop:count" into count values spaced evenly from start to stop.
inline std::vector<double> parse_lambda_grid(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
  if (c2 == std::string::npos) throw std::invalid_argument("--lambda-grid expects start:stop:count");
  const auto start = fractherm::detail::to_real(spec.substr(0, c1));
  const auto stop = fractherm::detail::to_real(spec.substr(c1 + 1, c2 - c1 - 1));
  const std::string count_text = spec.substr(c2 + 1);
  long count = -1;
  try {
    std::size_t used = 0;
    count = std::stol(count_text, &used);
    if (used != count_text.size()) count = -1;
  } catch (...) {
    count = -1;
  }
  if (!start || !stop || count < 0) throw std::invalid_argument("--lambda-grid expects start:stop:count");
  if (count == 0) throw std::invalid_argument("--lambda-grid is empty");
  if (!(*start > 0.0)) throw std::invalid_argument("--lambda-grid start must be positive");
  if (count > 1 && !(*stop > *start)) throw std::invalid_argument("--lambda-grid stop must exceed start");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    grid[i] = count == 1 ? *start : *start + (*stop - *start) * static_cast<double>(i) / (count - 1);
  }
  return grid;
}

inline std::string sweep_header() {
  return "lambda,lambda_over_threshold,q,converged,iterations,weighted_norm_u,apriori_bound,"
         "empirical_rate\n";
}

/// `sweep`: one solve per lambda, rows in grid order, written to sweep.csv.
inline int run_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto grid = parse_lambda_grid(o.lambda_grid);
    const auto setup = detail::prepare(o);
    const double N = *setup.solver.N;
    const WeightTable w2a = build_weights(setup.mesh, setup.file.problem.order.two_alpha());
    const double threshold = lambda_threshold(setup.file.problem, N);

    std::string csv = sweep_header();
    int converged = 0;
    for (double lambda : grid) {
      const ThermistorProblem p = setup.file.problem.with_lambda(lambda);
      const SolveReport r = solve_picard(p, w2a, setup.solver);
      converged += r.converged ? 1 : 0;
      csv += format_real(lambda) + ',' + format_real(std::isinf(threshold) ? 0.0 : lambda / threshold) +
             ',' + format_real(r.theoretical_q) + ',' + (r.converged ? "true" : "false") + ',' +
             std::to_string(r.iterations) + ',' + format_real(r.weighted_norm_u) + ',' +
             format_real(r.apriori_bound) + ',' + format_real(r.empirical_rate) + '\n';
    }
    detail::write_file(o.out_dir, "sweep.csv", csv);
    out << converged << " of " << grid.size() << " solves converged\n";
    return static_cast<int>(kOk);
  });
}

}  // namespace fractherm::cli
