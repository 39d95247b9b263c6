#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fractherm/fractional.hpp"
#include "fractherm/model.hpp"

namespace fractherm {

/// Flags raised while evaluating the map; they never change the result.
struct MapDiagnostics {
  bool f_clamped = false;            // some f(u(t_k)) hit c1 or c2
  bool denominator_clamped = false;  // trapezoid left [(c1 T)^2, (c2 T)^2]
};

inline void require_endpoint(const Mesh& mesh, double T, const char* where) {
  if (std::abs(mesh.T() - T) > 1e-12 * T) {
    throw std::invalid_argument(std::string(where) + ": mesh endpoint does not match problem T");
  }
}

/// (int_0^T f(u(x)) dx)^2 by the composite trapezoidal rule on u's mesh,
/// kept inside [(c1 T)^2, (c2 T)^2].
inline double nonlocal_denominator(const GridFunction& u, const Conductivity& f,
                                   MapDiagnostics* diag = nullptr) {
  const Mesh& mesh = *u.mesh();
  std::vector<double> fu(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const auto s = f.eval(u[k]);
    fu[k] = s.value;
    if (s.clamped && diag) diag->f_clamped = true;
  }
  const double integral = trapezoid(GridFunction(u.mesh(), std::move(fu)));
  const double lo = f.c1() * mesh.T(), hi = f.c2() * mesh.T();
  double d = integral * integral;
  if (d < lo * lo) {
    d = lo * lo;
    if (diag) diag->denominator_clamped = true;
  } else if (d > hi * hi) {
    d = hi * hi;
    if (diag) diag->denominator_clamped = true;
  }
  return d;
}

/// lambda f(u(t_k)) / D + h(t_k) at every node.
inline GridFunction rhs_field(const ThermistorProblem& problem, const GridFunction& u,
                              MapDiagnostics* diag = nullptr) {
  require_endpoint(*u.mesh(), problem.T, "rhs_field");
  const double D = nonlocal_denominator(u, problem.f, diag);
  const double scale = problem.lambda / D;
  std::vector<double> out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    out[k] = scale * problem.f(u[k]) + problem.h(u.node(k));
  }
  return GridFunction(u.mesh(), std::move(out));
}

/// The fixed-point map F u = I^{2 alpha} [rhs_field(u)].
/// `w2a` must be the weight table of order 2 alpha on u's mesh.
inline GridFunction apply_F(const ThermistorProblem& problem, const GridFunction& u,
                            const WeightTable& w2a, MapDiagnostics* diag = nullptr) {
  require_same_mesh(u.mesh(), w2a.mesh(), "apply_F");
  if (std::abs(w2a.order() - problem.order.two_alpha()) > 1e-15) {
    throw std::invalid_argument("apply_F: weight table order must equal 2 alpha");
  }
  return fractional_integral(rhs_field(problem, u, diag), w2a);
}

}  // namespace fractherm
