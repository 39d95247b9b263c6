#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "fractherm/solver.hpp"

namespace fractherm {

// ---------------------------------------------------------------------------
// Residual of the differential form
// ---------------------------------------------------------------------------

/// r = D^{2 alpha} u - (lambda f(u)/D + h) at every node.
inline GridFunction residual(const ThermistorProblem& p, const GridFunction& u) {
  require_endpoint(*u.mesh(), p.T, "residual");
  const double order = p.order.two_alpha();
  const WeightTable complement = build_weights(u.mesh(), 1.0 - order);
  return rl_derivative(u, order, complement) - rhs_field(p, u);
}

/// Fraction of [0, T] cut off by the interior window [f T, T]. The
/// discrete derivative of a t^{2 alpha}-type function has an O(1) error at
/// the first few nodes for every n (the local picture is scale invariant),
/// so decay is measured on a fixed window away from t = 0.
inline constexpr double kDefaultInteriorFraction = 0.1;

struct ResidualNorms {
  double sup = 0.0;           // nodes 1..n
  double l1 = 0.0;            // sum_{k>=1} |r_k| (t_k - t_{k-1})
  double interior_sup = 0.0;  // nodes with t_k >= fraction * T
};

inline ResidualNorms residual_norms(const GridFunction& r,
                                    double interior_fraction = kDefaultInteriorFraction) {
  const Mesh& mesh = *r.mesh();
  ResidualNorms out;
  for (std::size_t k = 1; k < r.size(); ++k) {
    const double a = std::abs(r[k]);
    out.sup = std::max(out.sup, a);
    out.l1 += a * mesh.width(k - 1);
    if (mesh.node(k) >= interior_fraction * mesh.T()) out.interior_sup = std::max(out.interior_sup, a);
  }
  return out;
}

/// sup_k |I^{1-2 alpha} u(t_k) - int_0^{t_k} rhs(u) ds|: the integrated form
/// of the equation, before the final differentiation.
inline double integrated_form_gap(const ThermistorProblem& p, const GridFunction& u) {
  const WeightTable complement = build_weights(u.mesh(), 1.0 - p.order.two_alpha());
  return sup_norm(fractional_integral(u, complement) - cumulative_trapezoid(rhs_field(p, u)));
}

// ---------------------------------------------------------------------------
// Initial condition I^beta u (0) = 0
// ---------------------------------------------------------------------------

struct InitialConditionValue {
  double beta;
  double value;  // I^beta u (t_1)
  double limit;  // 2 ||u||_sup t_1^beta / Gamma(beta + 1)
  bool pass;
};

struct InitialConditionResult {
  bool pass = true;
  std::vector<InitialConditionValue> values;
};

inline const std::vector<double>& default_betas() {
  static const std::vector<double> betas{0.1, 0.5, 1.0};
  return betas;
}

/// Evaluates I^beta u at the first positive node and checks that it is no
/// larger than continuity allows; the bound shrinks to 0 with t_1.
inline InitialConditionResult check_initial_condition(const GridFunction& u,
                                                      const std::vector<double>& betas = default_betas()) {
  for (double b : betas) {
    if (!(b > 0.0 && b <= 1.0)) {
      throw std::invalid_argument("check_initial_condition: beta must lie in (0, 1]");
    }
  }
  const Mesh& mesh = *u.mesh();
  const double t1 = mesh.node(1);
  const double usup = sup_norm(u);
  InitialConditionResult out;
  for (double b : betas) {
    const auto row = build_weight_row(mesh, b, 1);
    const double value = row[0] * u[0] + row[1] * u[1];
    const double limit = 2.0 * usup * std::pow(t1, b) / gamma_fn(b + 1.0);
    const bool ok = std::abs(value) <= limit;
    out.values.push_back({b, value, limit, ok});
    out.pass = out.pass && ok;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contraction and bound certificates
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for trial `index` derived from `seed`.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

}  // namespace detail

/// max over random pairs (u, v) of ||F u - F v||_N / ||u - v||_N, nodal
/// values uniform in [0, sample_max], by default [0, 2 apriori_bound].
/// Deterministic for a given seed.
inline double empirical_contraction_rate(const ThermistorProblem& p, double N,
                                         const WeightTable& w2a, int trials, std::uint64_t seed,
                                         std::optional<double> sample_max = {}) {
  if (trials < 1) throw std::invalid_argument("empirical_contraction_rate: trials must be >= 1");
  if (sample_max && !(*sample_max > 0.0)) {
    throw std::invalid_argument("empirical_contraction_rate: sample_max must be positive");
  }
  const MeshPtr& mesh = w2a.mesh();
  const double top = sample_max ? *sample_max : 2.0 * apriori_bound(p, N);
  std::vector<double> ratios(static_cast<std::size_t>(trials), 0.0);
  parallel_for(0, ratios.size(), [&](std::size_t i) {
    std::mt19937_64 rng(detail::stream_seed(seed, i));
    std::uniform_real_distribution<double> dist(0.0, top);
    std::vector<double> a(mesh->size()), b(mesh->size());
    for (double& x : a) x = dist(rng);
    for (double& x : b) x = dist(rng);
    const GridFunction u(mesh, std::move(a)), v(mesh, std::move(b));
    const double denom = weighted_distance(u, v, N);
    if (denom == 0.0) return;  // degenerate pair
    ratios[i] = weighted_distance(apply_F(p, u, w2a), apply_F(p, v, w2a), N) / denom;
  }, 1);
  double m = 0.0;
  for (double r : ratios) m = std::max(m, r);
  return m;
}

inline double empirical_contraction_rate(const ThermistorProblem& p, double N, const MeshPtr& mesh,
                                         int trials, std::uint64_t seed,
                                         std::optional<double> sample_max = {}) {
  return empirical_contraction_rate(p, N, build_weights(mesh, p.order.two_alpha()), trials, seed,
                                    sample_max);
}

/// Relative slack on the a-priori bound.
inline constexpr double kBoundSlack = 1e-6;

/// True iff ||u||_N <= apriori_bound (1 + 1e-6). Requires a converged report.
inline bool bound_check(const SolveReport& report, const ThermistorProblem& p, double N) {
  if (!report.converged) throw std::invalid_argument("bound_check: report is not converged");
  return weighted_norm(report.u, N) <= apriori_bound(p, N) * (1.0 + kBoundSlack);
}

// ---------------------------------------------------------------------------
// Refinement studies
// ---------------------------------------------------------------------------

struct ConvergenceLevel {
  std::size_t n = 0;
  double error = 0.0;           // sup over all nodes
  double interior_error = 0.0;  // sup over t_k >= kDefaultInteriorFraction * T
  double order = std::numeric_limits<double>::quiet_NaN();  // log2(e_{k-1}/e_k), from level 1 on
  double interior_order = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
};

struct ConvergenceTable {
  std::vector<ConvergenceLevel> levels;
  bool reference_is_exact = false;
};

/// Solves on n = base_n * 2^l, l = 0..levels-1, and measures the nodal sup
/// error against `exact` when given, otherwise against one further
/// refinement level (coarse nodes are a subset of fine nodes for every
/// grading). On uniform meshes the all-node error is dominated by the first
/// interval, where the solution behaves like t^{2 alpha}, and decays only
/// like h^{4 alpha}; the interior error decays at least like h.
inline ConvergenceTable convergence_study(const ThermistorProblem& p, std::size_t base_n,
                                          int levels, double grading = 1.0,
                                          const SolverOptions& opts = {},
                                          const std::function<double(double)>& exact = {}) {
  if (levels < 2) throw std::invalid_argument("convergence_study: levels must be >= 2");
  if (base_n < 1) throw std::invalid_argument("convergence_study: base_n must be >= 1");
  SolverOptions o = opts;
  if (!o.N) o.N = choose_N(p);

  ConvergenceTable table;
  table.reference_is_exact = static_cast<bool>(exact);
  std::optional<SolveReport> reference;
  if (!exact) {
    reference = solve_picard(p, make_mesh(p.T, base_n << levels, grading), o);
  }
  for (int l = 0; l < levels; ++l) {
    const std::size_t n = base_n << l;
    const SolveReport r = solve_picard(p, make_mesh(p.T, n, grading), o);
    ConvergenceLevel level;
    level.n = n;
    level.converged = r.converged;
    for (std::size_t k = 0; k <= n; ++k) {
      const double ref = exact ? exact(r.u.node(k)) : reference->u[k << (levels - l)];
      const double e = std::abs(r.u[k] - ref);
      level.error = std::max(level.error, e);
      if (r.u.node(k) >= kDefaultInteriorFraction * p.T) {
        level.interior_error = std::max(level.interior_error, e);
      }
    }
    if (l > 0) {
      level.order = std::log2(table.levels.back().error / level.error);
      level.interior_order = std::log2(table.levels.back().interior_error / level.interior_error);
    }
    table.levels.push_back(level);
  }
  return table;
}

struct ResidualLevel {
  std::size_t n = 0;
  ResidualNorms norms;
  double ratio = std::numeric_limits<double>::quiet_NaN();  // interior_sup / previous
  bool converged = false;
};

/// Interior residual of the converged solution under n -> 2n -> 4n ...
inline std::vector<ResidualLevel> residual_refinement(const ThermistorProblem& p, std::size_t base_n,
                                                      int levels, double grading = 1.0,
                                                      const SolverOptions& opts = {}) {
  std::vector<ResidualLevel> out;
  for (int l = 0; l < levels; ++l) {
    const std::size_t n = base_n << l;
    const SolveReport r = solve_picard(p, make_mesh(p.T, n, grading), opts);
    ResidualLevel level{n, residual_norms(residual(p, r.u)), std::numeric_limits<double>::quiet_NaN(),
                        r.converged};
    if (!out.empty()) level.ratio = level.norms.interior_sup / out.back().norms.interior_sup;
    out.push_back(level);
  }
  return out;
}

}  // namespace fractherm
