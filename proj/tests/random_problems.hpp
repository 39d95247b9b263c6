#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fractherm/model.hpp"
#include "fractherm/solver.hpp"

namespace fractherm::testing {

/// Seeded random problem with alpha in (0.05, 0.45), T in [0.5, 2],
/// c1 in [0.3, 1], c2 in [c1, 2 c1], L_f in [0.1, 1]. lambda is set to
/// `lambda_fraction` of the threshold at the automatically chosen N.
inline ThermistorProblem random_problem(std::uint64_t seed, double lambda_fraction = 0.5) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  const double alpha = uni(0.05, 0.45);
  const double T = uni(0.5, 2.0);
  const double c1 = uni(0.3, 1.0);
  const double c2 = uni(c1, 2.0 * c1);
  const double L = uni(0.1, 1.0);
  const double mid = 0.5 * (c1 + c2);
  const double amp = 0.5 * (c2 - c1);

  const int shape = static_cast<int>(seed % 3);
  Conductivity f = (shape == 0 || amp < 1e-3)
                       ? Conductivity(ConductivityKind::affine_clamped, {mid, L}, L, c1, c2)
                       : Conductivity(ConductivityKind::sinusoidal, {mid, amp, L / amp, uni(0.0, 6.0)},
                                      L, c1, c2);
  Source h = shape == 2 ? Source(SourceKind::polynomial, {uni(0.0, 0.5), uni(-0.2, 0.2)}, T)
                        : Source::constant(uni(0.0, 0.5), T);

  ThermistorProblem p(FractionalOrder(alpha), 1.0, T, f, h);
  const double N = choose_N(p);
  return p.with_lambda(lambda_fraction * lambda_threshold(p, N));
}

}  // namespace fractherm::testing
