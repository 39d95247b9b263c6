#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "fractherm/fixed_point_map.hpp"

namespace fractherm {

/// Weighted sup norm max_k e^{-N t_k} |g(t_k)|.
inline double weighted_norm(const GridFunction& g, double N) {
  if (!(N > 0.0)) throw std::invalid_argument("weighted_norm: N must be positive");
  double m = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    m = std::max(m, std::exp(-N * g.node(k)) * std::abs(g[k]));
  }
  return m;
}

inline double weighted_distance(const GridFunction& a, const GridFunction& b, double N) {
  return weighted_norm(a - b, N);
}

namespace detail {

/// 1/(c1 T)^2 + 2 c2^2 T e^{NT} / (c1 T)^4
inline double lipschitz_factor(const ThermistorProblem& p, double N) {
  const double c1T = p.f.c1() * p.T;
  const double c1T2 = c1T * c1T;
  return 1.0 / c1T2 + 2.0 * p.f.c2() * p.f.c2() * p.T * std::exp(N * p.T) / (c1T2 * c1T2);
}

inline void require_positive_N(double N, const char* where) {
  if (!(N > 0.0) || !std::isfinite(N)) {
    throw std::invalid_argument(std::string(where) + ": N must be positive");
  }
}

}  // namespace detail

/// Lipschitz constant of F in the weighted norm:
///   q = (1/(c1 T)^2 + 2 c2^2 T e^{NT}/(c1 T)^4) lambda L_f / N^{2 alpha}.
/// q < 1 certifies a unique fixed point.
inline double contraction_constant(const ThermistorProblem& p, double N) {
  detail::require_positive_N(N, "contraction_constant");
  return detail::lipschitz_factor(p, N) * p.lambda * p.f.lipschitz() /
         std::pow(N, p.order.two_alpha());
}

/// Largest lambda for which q(N) < 1; +infinity when L_f = 0.
inline double lambda_threshold(const ThermistorProblem& p, double N) {
  detail::require_positive_N(N, "lambda_threshold");
  if (p.f.lipschitz() == 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(N, p.order.two_alpha()) / (p.f.lipschitz() * detail::lipschitz_factor(p, N));
}

/// Weight parameter N minimizing the contraction constant. q(N) grows
/// without bound at both ends, so a grid over 2^-10..2^6 brackets the
/// minimum, which golden-section search then refines in log N.
inline double choose_N(const ThermistorProblem& p) {
  if (p.f.lipschitz() == 0.0) return 1.0;
  auto q = [&](double N) { return contraction_constant(p, N); };
  int best = -10;
  double best_q = q(std::ldexp(1.0, best));
  for (int e = -9; e <= 6; ++e) {
    const double v = q(std::ldexp(1.0, e));
    if (v < best_q) {
      best_q = v;
      best = e;
    }
  }
  double lo = std::log(std::ldexp(1.0, std::max(best - 1, -10)));
  double hi = std::log(std::ldexp(1.0, std::min(best + 1, 6)));
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double q1 = q(std::exp(x1)), q2 = q(std::exp(x2));
  // relative 1e-6 in N is 1e-6 in log N
  while (hi - lo > 1e-6) {
    if (q1 < q2) {
      hi = x2; x2 = x1; q2 = q1;
      x1 = hi - invphi * (hi - lo); q1 = q(std::exp(x1));
    } else {
      lo = x1; x1 = x2; q1 = q2;
      x2 = lo + invphi * (hi - lo); q2 = q(std::exp(x2));
    }
  }
  const double refined = std::exp(0.5 * (lo + hi));
  return q(refined) <= best_q ? refined : std::ldexp(1.0, best);
}

/// Gronwall ceiling on the weighted norm of the solution:
///   (lambda f(0)/(c1 T)^2 + h_inf) / N^{2 alpha} * exp(lambda L_f / (c1 T N^alpha)^2).
inline double apriori_bound(const ThermistorProblem& p, double N) {
  detail::require_positive_N(N, "apriori_bound");
  const double c1T = p.f.c1() * p.T;
  const double prefactor =
      (p.lambda / (c1T * c1T) * p.f(0.0) + p.h.h_inf()) / std::pow(N, p.order.two_alpha());
  const double c1TNa = c1T * std::pow(N, p.alpha());
  return prefactor * std::exp(p.lambda * p.f.lipschitz() / (c1TNa * c1TNa));
}

enum class InitialGuess { zero, rhs_integral };

inline std::string_view to_string(InitialGuess g) {
  return g == InitialGuess::zero ? "zero" : "rhs-integral";
}

struct SolverOptions {
  std::optional<double> N;  // empty means choose_N
  double tol = 1e-10;
  int max_iter = 200;
  InitialGuess initial_guess = InitialGuess::zero;

  void validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("solver: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
    if (N && !(*N > 0.0)) throw std::invalid_argument("solver: N must be positive");
  }
};

struct SolveReport {
  GridFunction u;
  int iterations = 0;
  std::vector<double> step_norms;  // ||u_{k+1} - u_k||_N in iteration order
  double N = 1.0;
  double empirical_rate = 0.0;
  double theoretical_q = 0.0;
  double lambda_threshold = 0.0;
  double apriori_bound = 0.0;
  double weighted_norm_u = 0.0;
  double residual_sup = std::numeric_limits<double>::quiet_NaN();  // set by verify
  double min_u = 0.0;
  bool converged = false;
  bool f_clamped = false;
  InitialGuess initial_guess = InitialGuess::zero;

  bool contraction_certified() const { return theoretical_q < 1.0; }
};

/// Max ratio of consecutive step norms, skipping steps at round-off level
/// (below 100 eps relative to the iterate's size).
inline double empirical_rate_of(const std::vector<double>& steps, double scale) {
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
  double rate = 0.0;
  for (std::size_t k = 1; k < steps.size(); ++k) {
    if (steps[k] < floor || steps[k - 1] < floor) continue;
    rate = std::max(rate, steps[k] / steps[k - 1]);
  }
  return rate;
}

inline GridFunction initial_iterate(const ThermistorProblem& p, const MeshPtr& mesh,
                                    InitialGuess guess) {
  GridFunction zero(mesh);
  if (guess == InitialGuess::zero) return zero;
  return cumulative_trapezoid(rhs_field(p, zero));
}

/// Picard iteration u_{k+1} = F(u_k), stopped when the weighted step norm
/// drops to opts.tol. Running out of iterations is reported, not thrown.
inline SolveReport solve_picard(const ThermistorProblem& p, const WeightTable& w2a,
                                const SolverOptions& opts = {}) {
  opts.validate();
  const MeshPtr& mesh = w2a.mesh();
  require_endpoint(*mesh, p.T, "solve_picard");

  const double N = opts.N ? *opts.N : choose_N(p);
  SolveReport r{.u = initial_iterate(p, mesh, opts.initial_guess)};
  r.N = N;
  r.initial_guess = opts.initial_guess;
  r.theoretical_q = contraction_constant(p, N);
  r.lambda_threshold = lambda_threshold(p, N);
  r.apriori_bound = apriori_bound(p, N);

  MapDiagnostics diag;
  for (int k = 0; k < opts.max_iter; ++k) {
    GridFunction next = apply_F(p, r.u, w2a, &diag);
    const double step = weighted_distance(next, r.u, N);
    r.u = std::move(next);
    r.step_norms.push_back(step);
    r.iterations = k + 1;
    if (step <= opts.tol) {
      r.converged = true;
      break;
    }
  }
  r.weighted_norm_u = weighted_norm(r.u, N);
  r.empirical_rate = empirical_rate_of(r.step_norms, r.weighted_norm_u);
  r.min_u = *std::min_element(r.u.values().begin(), r.u.values().end());
  r.f_clamped = diag.f_clamped;
  return r;
}

inline SolveReport solve_picard(const ThermistorProblem& p, const MeshPtr& mesh,
                                const SolverOptions& opts = {}) {
  require_endpoint(*mesh, p.T, "solve_picard");
  return solve_picard(p, build_weights(mesh, p.order.two_alpha()), opts);
}

}  // namespace fractherm
