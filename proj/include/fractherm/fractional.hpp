#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fractherm/mesh.hpp"
#include "fractherm/parallel.hpp"
#include "fractherm/weights.hpp"

namespace fractherm {

/// Discrete Riemann-Liouville integral I^order g at every node. The value at
/// t_0 = 0 is exactly zero. Each row is summed left to right.
inline GridFunction fractional_integral(const GridFunction& g, const WeightTable& w) {
  require_same_mesh(g.mesh(), w.mesh(), "fractional_integral");
  const auto values = g.values();
  std::vector<double> out(g.size(), 0.0);
  parallel_for(1, g.size(), [&](std::size_t k) {
    const auto row = w.row(k);
    double sum = 0.0;
    for (std::size_t j = 0; j <= k; ++j) sum += row[j] * values[j];
    out[k] = sum;
  }, 256);
  return GridFunction(g.mesh(), std::move(out));
}

/// Derivative of nodal data on a nonuniform mesh: forward difference at the
/// first node, backward at the last, three-point centered formula inside.
inline GridFunction differentiate(const GridFunction& v) {
  const Mesh& mesh = *v.mesh();
  const std::size_t n = mesh.intervals();
  std::vector<double> d(v.size(), 0.0);
  d[0] = (v[1] - v[0]) / mesh.width(0);
  d[n] = (v[n] - v[n - 1]) / mesh.width(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    const double h1 = mesh.width(k - 1);
    const double h2 = mesh.width(k);
    d[k] = -h2 / (h1 * (h1 + h2)) * v[k - 1] + (h2 - h1) / (h1 * h2) * v[k] +
           h1 / (h2 * (h1 + h2)) * v[k + 1];
  }
  return GridFunction(v.mesh(), std::move(d));
}

/// Riemann-Liouville derivative D^order g = d/dt I^(1-order) g for order in
/// (0, 1). `complement` must hold the weights of order 1 - order on g's mesh.
/// First order in the mesh width away from t = 0.
inline GridFunction rl_derivative(const GridFunction& g, double order,
                                  const WeightTable& complement) {
  if (!(order > 0.0 && order < 1.0)) {
    throw std::invalid_argument("rl_derivative: order must lie in (0, 1)");
  }
  if (std::abs(complement.order() - (1.0 - order)) > 1e-14) {
    throw std::invalid_argument("rl_derivative: weight table must have order 1 - order");
  }
  return differentiate(fractional_integral(g, complement));
}

}  // namespace fractherm
