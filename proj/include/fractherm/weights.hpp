#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fractherm/gamma.hpp"
#include "fractherm/mesh.hpp"
#include "fractherm/parallel.hpp"

namespace fractherm {

namespace detail {

/// Kernel moments of one subinterval, in the variable tau = t_k - s.
/// With tau in [A, B], h = B - A:
///   left  = int_A^B tau^(a-1) (tau - A) dtau   (pairs with the value at t_j)
///   right = int_A^B tau^(a-1) (B - tau) dtau   (pairs with the value at t_{j+1})
struct IntervalMoments {
  double left;
  double right;
};

inline IntervalMoments interval_moments(double A, double B, double h, double a) {
  const double u = h / B;
  if (u > 0.5) {
    // Near the singularity: the closed form loses at most a factor ~4.
    const double Ba = std::pow(B, a);
    const double Aa = A > 0.0 ? std::pow(A, a) : 0.0;
    const double diff_a = (Ba - Aa) / a;
    const double diff_a1 = (B * Ba - A * Aa) / (a + 1.0);
    return {diff_a1 - A * diff_a, B * diff_a - diff_a1};
  }
  // Far from the singularity, expand (1 - y)^(a-1) = sum c_m y^m with
  // y = 1 - tau/B in [0, u]. Every term is positive so nothing cancels.
  double c = 1.0;
  double upow = u * u;
  double left = 0.0;
  double right = 0.0;
  for (int m = 0; m < 200; ++m) {
    const double term = c * upow / (m + 2.0);
    right += term;
    left += term / (m + 1.0);
    if (term < 1e-18 * right) break;
    c *= (m + 1.0 - a) / (m + 1.0);
    upow *= u;
    if (c == 0.0) break;
  }
  const double scale = B * std::pow(B, a);
  return {scale * left, scale * right};
}

inline void require_order(double order) {
  if (!(order > 0.0 && order <= 1.0)) {
    throw std::invalid_argument("build_weights: order must lie in (0, 1]");
  }
}

/// Row k of the product-trapezoidal table on a general mesh.
inline void fill_row(const Mesh& mesh, double order, double inv_gamma, std::size_t k,
                     std::span<double> row) {
  const auto t = mesh.nodes();
  for (double& w : row) w = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double h = t[j + 1] - t[j];
    const double B = t[k] - t[j];
    const double A = t[k] - t[j + 1];
    const IntervalMoments m = interval_moments(A, B, h, order);
    const double scale = inv_gamma / h;
    row[j] += scale * m.left;
    row[j + 1] += scale * m.right;
  }
}

}  // namespace detail

/// Lower-triangular product-trapezoidal weights for the Riemann-Liouville
/// integral of a given order:
///   (I^order g)(t_k) ~ sum_{j<=k} w[k][j] g(t_j).
/// On each subinterval g is replaced by its linear interpolant and the
/// kernel (t_k - s)^(order-1) / Gamma(order) is integrated exactly, so the
/// rule is exact for piecewise-linear g.
class WeightTable {
 public:
  WeightTable(MeshPtr mesh, double order) : mesh_(std::move(mesh)), order_(order) {
    if (!mesh_) throw std::invalid_argument("build_weights: null mesh");
    detail::require_order(order);
    const std::size_t n = mesh_->intervals();
    weights_.assign((n + 1) * (n + 2) / 2, 0.0);
    const double inv_gamma = 1.0 / gamma_fn(order);

    if (mesh_->uniform()) {
      // Moments depend only on the offset d = k - j.
      const double h = mesh_->T() / static_cast<double>(n);
      std::vector<detail::IntervalMoments> by_offset(n + 1, {0.0, 0.0});
      for (std::size_t d = 1; d <= n; ++d) {
        const double dd = static_cast<double>(d);
        const auto m = detail::interval_moments((dd - 1.0) * h, dd * h, h, order);
        by_offset[d] = {inv_gamma / h * m.left, inv_gamma / h * m.right};
      }
      parallel_for(1, n + 1, [&](std::size_t k) {
        double* row = weights_.data() + offset(k);
        for (std::size_t j = 0; j <= k; ++j) {
          double w = 0.0;
          if (j < k) w += by_offset[k - j].left;
          if (j >= 1) w += by_offset[k - j + 1].right;
          row[j] = w;
        }
      });
    } else {
      parallel_for(1, n + 1, [&](std::size_t k) {
        detail::fill_row(*mesh_, order, inv_gamma, k,
                         std::span<double>(weights_.data() + offset(k), k + 1));
      });
    }
  }

  const MeshPtr& mesh() const { return mesh_; }
  double order() const { return order_; }
  std::size_t rows() const { return mesh_->size(); }

  std::span<const double> row(std::size_t k) const {
    return {weights_.data() + offset(k), k + 1};
  }
  double at(std::size_t k, std::size_t j) const { return weights_[offset(k) + j]; }

 private:
  static std::size_t offset(std::size_t k) { return k * (k + 1) / 2; }

  MeshPtr mesh_;
  double order_;
  std::vector<double> weights_;
};

inline WeightTable build_weights(MeshPtr mesh, double order) {
  return WeightTable(std::move(mesh), order);
}

/// Single row k of the table, without building the rest.
inline std::vector<double> build_weight_row(const Mesh& mesh, double order, std::size_t k) {
  detail::require_order(order);
  if (k >= mesh.size()) throw std::invalid_argument("build_weight_row: row out of range");
  std::vector<double> row(k + 1, 0.0);
  detail::fill_row(mesh, order, 1.0 / gamma_fn(order), k, row);
  return row;
}

}  // namespace fractherm
