#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fractherm {

/// Partition 0 = t_0 < t_1 < ... < t_n = T of the time interval, with nodes
/// t_j = T (j/n)^r. A grading exponent r = 1 gives the uniform mesh; r > 1
/// clusters nodes near t = 0.
class Mesh {
 public:
  Mesh(double T, std::size_t n, double grading) : T_(T), n_(n), grading_(grading) {
    if (!(T > 0.0) || !std::isfinite(T)) {
      throw std::invalid_argument("make_mesh: T must be positive and finite");
    }
    if (n < 1) throw std::invalid_argument("make_mesh: n must be at least 1");
    if (!(grading >= 1.0) || !std::isfinite(grading)) {
      throw std::invalid_argument("make_mesh: grading must be >= 1");
    }
    nodes_.resize(n + 1);
    const double dn = static_cast<double>(n);
    for (std::size_t j = 0; j <= n; ++j) {
      const double dj = static_cast<double>(j);
      nodes_[j] = grading == 1.0 ? T * dj / dn : T * std::pow(dj / dn, grading);
    }
    nodes_.front() = 0.0;
    nodes_.back() = T;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(nodes_[j] < nodes_[j + 1])) {
        throw std::invalid_argument("make_mesh: nodes are not strictly increasing at j=" +
                                    std::to_string(j));
      }
    }
  }

  double T() const { return T_; }
  std::size_t intervals() const { return n_; }
  std::size_t size() const { return n_ + 1; }
  double grading() const { return grading_; }
  bool uniform() const { return grading_ == 1.0; }

  std::span<const double> nodes() const { return nodes_; }
  double node(std::size_t j) const { return nodes_[j]; }
  /// Width of subinterval [t_j, t_{j+1}].
  double width(std::size_t j) const { return nodes_[j + 1] - nodes_[j]; }

  bool operator==(const Mesh& other) const { return nodes_ == other.nodes_; }

 private:
  double T_;
  std::size_t n_;
  double grading_;
  std::vector<double> nodes_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

inline MeshPtr make_mesh(double T, std::size_t n, double grading = 1.0) {
  return std::make_shared<const Mesh>(T, n, grading);
}

inline bool same_mesh(const MeshPtr& a, const MeshPtr& b) {
  return a && b && (a == b || *a == *b);
}

/// Order alpha in (0, 1/2) of the derivative D^{2 alpha}.
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
      throw std::invalid_argument("FractionalOrder: alpha must lie in (0, 1/2)");
    }
  }
  double alpha() const { return alpha_; }
  double two_alpha() const { return 2.0 * alpha_; }

  bool operator==(const FractionalOrder&) const = default;

 private:
  double alpha_;
};

/// Nodal samples of a real function on a mesh.
class GridFunction {
 public:
  GridFunction(MeshPtr mesh, std::vector<double> values)
      : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (!mesh_) throw std::invalid_argument("GridFunction: null mesh");
    if (values_.size() != mesh_->size()) {
      throw std::invalid_argument("GridFunction: expected " + std::to_string(mesh_->size()) +
                                  " values, got " + std::to_string(values_.size()));
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
    }
  }

  /// Zero function on the mesh.
  explicit GridFunction(MeshPtr mesh) : GridFunction(mesh, std::vector<double>(mesh ? mesh->size() : 0)) {}

  static GridFunction sample(MeshPtr mesh, const std::function<double(double)>& fn) {
    std::vector<double> v(mesh->size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(mesh->node(k));
    return GridFunction(std::move(mesh), std::move(v));
  }

  const MeshPtr& mesh() const { return mesh_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double node(std::size_t k) const { return mesh_->node(k); }

 private:
  MeshPtr mesh_;
  std::vector<double> values_;
};

inline void require_same_mesh(const MeshPtr& a, const MeshPtr& b, const char* where) {
  if (!same_mesh(a, b)) throw std::invalid_argument(std::string(where) + ": mesh mismatch");
}

inline GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_mesh(a.mesh(), b.mesh(), "GridFunction subtraction");
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] - b[k];
  return GridFunction(a.mesh(), std::move(out));
}

inline GridFunction scaled(const GridFunction& a, double factor) {
  std::vector<double> out(a.values().begin(), a.values().end());
  for (double& v : out) v *= factor;
  return GridFunction(a.mesh(), std::move(out));
}

/// Maximum absolute nodal value.
inline double sup_norm(const GridFunction& g) {
  double m = 0.0;
  for (double v : g.values()) m = std::max(m, std::abs(v));
  return m;
}

/// Composite trapezoidal rule over the whole mesh.
inline double trapezoid(const GridFunction& g) {
  const Mesh& mesh = *g.mesh();
  double sum = 0.0;
  for (std::size_t j = 0; j < mesh.intervals(); ++j) {
    sum += 0.5 * mesh.width(j) * (g[j] + g[j + 1]);
  }
  return sum;
}

/// Running trapezoidal integral, value k = integral over [0, t_k].
inline GridFunction cumulative_trapezoid(const GridFunction& g) {
  const Mesh& mesh = *g.mesh();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t j = 0; j < mesh.intervals(); ++j) {
    out[j + 1] = out[j] + 0.5 * mesh.width(j) * (g[j] + g[j + 1]);
  }
  return GridFunction(g.mesh(), std::move(out));
}

}  // namespace fractherm
