#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fractherm/mesh.hpp"

namespace fractherm {

enum class ConductivityKind { constant, affine_clamped, sinusoidal, table };
enum class SourceKind { zero, constant, table, polynomial };

inline std::string_view to_string(ConductivityKind k) {
  switch (k) {
    case ConductivityKind::constant: return "constant";
    case ConductivityKind::affine_clamped: return "affine-clamped";
    case ConductivityKind::sinusoidal: return "sinusoidal";
    case ConductivityKind::table: return "table";
  }
  return "?";
}

inline std::string_view to_string(SourceKind k) {
  switch (k) {
    case SourceKind::zero: return "zero";
    case SourceKind::constant: return "constant";
    case SourceKind::table: return "table";
    case SourceKind::polynomial: return "polynomial";
  }
  return "?";
}

inline ConductivityKind parse_conductivity_kind(std::string_view s) {
  for (auto k : {ConductivityKind::constant, ConductivityKind::affine_clamped,
                 ConductivityKind::sinusoidal, ConductivityKind::table}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown conductivity kind '" + std::string(s) + "'");
}

inline SourceKind parse_source_kind(std::string_view s) {
  for (auto k : {SourceKind::zero, SourceKind::constant, SourceKind::table,
                 SourceKind::polynomial}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown source kind '" + std::string(s) + "'");
}

namespace detail {

/// Piecewise-linear interpolation through (x_i, y_i) pairs stored flat,
/// held constant outside the table range.
inline double interpolate_table(const std::vector<double>& xy, double x) {
  const std::size_t m = xy.size() / 2;
  if (x <= xy[0]) return xy[1];
  if (x >= xy[2 * (m - 1)]) return xy[2 * (m - 1) + 1];
  std::size_t lo = 0;
  std::size_t hi = m - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (xy[2 * mid] <= x) lo = mid; else hi = mid;
  }
  const double x0 = xy[2 * lo], y0 = xy[2 * lo + 1];
  const double x1 = xy[2 * hi], y1 = xy[2 * hi + 1];
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

inline void validate_table(const std::vector<double>& xy, const char* who) {
  if (xy.size() < 4 || xy.size() % 2 != 0) {
    throw std::invalid_argument(std::string(who) + ": table needs at least two (x, y) pairs");
  }
  for (std::size_t i = 1; i < xy.size() / 2; ++i) {
    if (!(xy[2 * i] > xy[2 * (i - 1)])) {
      throw std::invalid_argument(std::string(who) + ": table abscissae must increase");
    }
  }
}

inline void require_finite(const std::vector<double>& v, const char* who) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(who) + ": non-finite parameter");
  }
}

}  // namespace detail

/// Electrical conductivity f(u) with declared Lipschitz constant and bounds
/// c1 <= f <= c2. Values are clamped into [c1, c2] on evaluation.
///
/// Parameters by kind:
///   constant         {value}
///   affine-clamped   {offset, slope}              f = offset + slope*u
///   sinusoidal       {mean, amplitude, freq, phase} f = mean + amplitude*sin(freq*u + phase)
///   table            {u0, f0, u1, f1, ...}        piecewise linear in u
class Conductivity {
 public:
  struct Sample {
    double value;
    bool clamped;
  };

  Conductivity(ConductivityKind kind, std::vector<double> params, double lipschitz, double c1,
               double c2)
      : kind_(kind), params_(std::move(params)), lipschitz_(lipschitz), c1_(c1), c2_(c2) {
    detail::require_finite(params_, "conductivity");
    if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) {
      throw std::invalid_argument("conductivity: L_f must be nonnegative");
    }
    if (!(c1 > 0.0) || !std::isfinite(c1)) throw std::invalid_argument("conductivity: c1 must be positive");
    if (!(c2 >= c1) || !std::isfinite(c2)) throw std::invalid_argument("conductivity: c2 must be >= c1");
    const std::size_t want = kind == ConductivityKind::constant         ? 1
                             : kind == ConductivityKind::affine_clamped ? 2
                             : kind == ConductivityKind::sinusoidal     ? 4
                                                                        : 0;
    if (kind == ConductivityKind::table) {
      detail::validate_table(params_, "conductivity");
    } else if (params_.size() != want) {
      throw std::invalid_argument("conductivity: kind '" + std::string(to_string(kind)) +
                                  "' takes " + std::to_string(want) + " parameters, got " +
                                  std::to_string(params_.size()));
    }
    spot_check_lipschitz();
  }

  /// Constant conductivity f == value (L_f = 0, c1 = c2 = value).
  static Conductivity constant(double value) {
    return Conductivity(ConductivityKind::constant, {value}, 0.0, value, value);
  }

  /// Formula value before clamping.
  double raw(double u) const {
    switch (kind_) {
      case ConductivityKind::constant: return params_[0];
      case ConductivityKind::affine_clamped: return params_[0] + params_[1] * u;
      case ConductivityKind::sinusoidal:
        return params_[0] + params_[1] * std::sin(params_[2] * u + params_[3]);
      case ConductivityKind::table: return detail::interpolate_table(params_, u);
    }
    return params_[0];
  }

  Sample eval(double u) const {
    const double r = raw(u);
    if (r < c1_) return {c1_, true};
    if (r > c2_) return {c2_, true};
    return {r, false};
  }

  double operator()(double u) const { return eval(u).value; }

  ConductivityKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  double lipschitz() const { return lipschitz_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }

  bool operator==(const Conductivity& o) const {
    return kind_ == o.kind_ && params_ == o.params_ && lipschitz_ == o.lipschitz_ &&
           c1_ == o.c1_ && c2_ == o.c2_;
  }

 private:
  // 1000 pairs: half spread over a wide range, half at short separation to
  // probe local slopes.
  void spot_check_lipschitz() const {
    double span = 10.0;
    if (kind_ == ConductivityKind::table) span = std::max(span, 2.0 * params_[params_.size() - 2]);
    if (kind_ == ConductivityKind::sinusoidal && params_[2] != 0.0) {
      span = std::max(span, 4.0 * 3.14159265358979 / std::abs(params_[2]));
    }
    std::mt19937_64 rng(0x5eedf00dULL);
    std::uniform_real_distribution<double> wide(0.0, span);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double a = wide(rng);
      const double b = i % 2 == 0 ? wide(rng) : a + 1e-3 * span * unit(rng);
      const double df = std::abs((*this)(a) - (*this)(b));
      const double allowed = lipschitz_ * std::abs(a - b);
      if (df > allowed * (1.0 + 1e-9) + 1e-14 * c2_) {
        throw std::invalid_argument("conductivity: |f(a) - f(b)| exceeds L_f |a - b| at a=" +
                                    std::to_string(a) + ", b=" + std::to_string(b));
      }
    }
  }

  ConductivityKind kind_;
  std::vector<double> params_;
  double lipschitz_;
  double c1_;
  double c2_;
};

/// Heat source h(t) on [0, T], with h_inf = sup |h| estimated at construction.
///
/// Parameters by kind:
///   zero        {}
///   constant    {value}
///   table       {t0, h0, t1, h1, ...}  piecewise linear in t
///   polynomial  {a0, a1, ..., ad}      h = sum a_i t^i
class Source {
 public:
  Source(SourceKind kind, std::vector<double> params, double T)
      : kind_(kind), params_(std::move(params)) {
    detail::require_finite(params_, "source");
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("source: T must be positive");
    switch (kind) {
      case SourceKind::zero:
        if (!params_.empty()) throw std::invalid_argument("source: kind 'zero' takes no parameters");
        break;
      case SourceKind::constant:
        if (params_.size() != 1) throw std::invalid_argument("source: kind 'constant' takes 1 parameter");
        break;
      case SourceKind::table: detail::validate_table(params_, "source"); break;
      case SourceKind::polynomial:
        if (params_.empty()) throw std::invalid_argument("source: polynomial needs coefficients");
        break;
    }
    sup_ = estimate_sup(T);
  }

  static Source zero(double T) { return Source(SourceKind::zero, {}, T); }
  static Source constant(double value, double T) { return Source(SourceKind::constant, {value}, T); }

  double operator()(double t) const {
    switch (kind_) {
      case SourceKind::zero: return 0.0;
      case SourceKind::constant: return params_[0];
      case SourceKind::table: return detail::interpolate_table(params_, t);
      case SourceKind::polynomial: {
        double acc = 0.0;
        for (auto it = params_.rbegin(); it != params_.rend(); ++it) acc = acc * t + *it;
        return acc;
      }
    }
    return 0.0;
  }

  SourceKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  double h_inf() const { return sup_; }

  bool operator==(const Source& o) const { return kind_ == o.kind_ && params_ == o.params_; }

 private:
  double estimate_sup(double T) const {
    switch (kind_) {
      case SourceKind::zero: return 0.0;
      case SourceKind::constant: return std::abs(params_[0]);
      case SourceKind::table: {
        // piecewise linear: extremes sit at breakpoints or at the ends
        double m = std::max(std::abs((*this)(0.0)), std::abs((*this)(T)));
        for (std::size_t i = 0; i < params_.size() / 2; ++i) {
          if (params_[2 * i] > 0.0 && params_[2 * i] < T) m = std::max(m, std::abs(params_[2 * i + 1]));
        }
        return m;
      }
      case SourceKind::polynomial: break;
    }
    // Dense sample, then polish each sampled local maximum of |h| by
    // golden-section search in its bracket.
    constexpr int samples = 10 * 1024;
    std::vector<double> v(samples + 1);
    for (int i = 0; i <= samples; ++i) v[i] = std::abs((*this)(T * i / samples));
    double m = *std::max_element(v.begin(), v.end());
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 1; i < samples; ++i) {
      if (v[i] < v[i - 1] || v[i] < v[i + 1]) continue;
      double lo = T * (i - 1) / samples, hi = T * (i + 1) / samples;
      for (int it = 0; it < 60; ++it) {
        const double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
        if (std::abs((*this)(x1)) > std::abs((*this)(x2))) hi = x2; else lo = x1;
      }
      m = std::max(m, std::abs((*this)(0.5 * (lo + hi))));
    }
    return m;
  }

  SourceKind kind_;
  std::vector<double> params_;
  double sup_ = 0.0;
};

/// All data of the fractional nonlocal thermistor problem
///   D^{2 alpha} u = lambda f(u) / (int_0^T f(u) dx)^2 + h(t),  t in (0, T).
struct ThermistorProblem {
  ThermistorProblem(FractionalOrder order_, double lambda_, double T_, Conductivity f_, Source h_)
      : order(order_), lambda(lambda_), T(T_), f(std::move(f_)), h(std::move(h_)) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("problem: lambda must be positive");
    }
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("problem: T must be positive");
  }

  double alpha() const { return order.alpha(); }

  /// Same data with a different lambda.
  ThermistorProblem with_lambda(double new_lambda) const {
    return ThermistorProblem(order, new_lambda, T, f, h);
  }

  bool operator==(const ThermistorProblem&) const = default;

  FractionalOrder order;
  double lambda;
  double T;
  Conductivity f;
  Source h;
};

}  // namespace fractherm
