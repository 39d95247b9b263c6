#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "fractherm/verify.hpp"
#include "oracles.hpp"
#include "random_problems.hpp"

namespace fractherm {
namespace {

ThermistorProblem constant_f_problem() {
  return ThermistorProblem(FractionalOrder(0.25), 1.0, 1.0, Conductivity::constant(1.0), Source::zero(1.0));
}

double closed_form(double t) { return std::sqrt(t) / std::tgamma(1.5); }

ThermistorProblem representative_problem(double fraction) {
  const Conductivity f(ConductivityKind::affine_clamped, {1.0, 0.5}, 0.5, 0.5, 1.5);
  const ThermistorProblem p(FractionalOrder(0.25), 1.0, 1.0, f, Source::zero(1.0));
  return p.with_lambda(fraction * lambda_threshold(p, choose_N(p)));
}

// ---------------------------------------------------------------- residual

TEST(Residual, ClosedFormDecays) {
  const auto p = constant_f_problem();
  double prev = 0.0;
  for (std::size_t n : {256u, 512u, 1024u, 2048u}) {
    const auto u = GridFunction::sample(make_mesh(1.0, n), closed_form);
    const double r = residual_norms(residual(p, u)).interior_sup;
    if (prev > 0.0) EXPECT_GE(testing::observed_order(prev, r), 0.8) << "n = " << n;
    prev = r;
  }
}

TEST(Residual, SolvedSolutionDecays) {
  const auto p = representative_problem(0.5);
  const auto levels = residual_refinement(p, 512, 3, 1.0, {.tol = 1e-12});
  ASSERT_EQ(levels.size(), 3u);
  for (std::size_t l = 1; l < levels.size(); ++l) {
    EXPECT_TRUE(levels[l].converged);
    EXPECT_LE(levels[l].ratio, 0.75) << "level " << l;
  }
}

TEST(Residual, DetectsNonSolution) {
  const Conductivity f(ConductivityKind::affine_clamped, {1.2, 0.5}, 0.5, 0.5, 1.5);
  const ThermistorProblem p(FractionalOrder(0.3), 0.8, 2.0, f, Source::zero(2.0));
  const auto r = residual(p, GridFunction(make_mesh(2.0, 64)));
  const double want = -0.8 / (1.2 * 4.0);
  for (std::size_t k = 0; k < r.size(); ++k) EXPECT_NEAR(r[k], want, 1e-15);
  const auto n = residual_norms(r);
  EXPECT_NEAR(n.sup, -want, 1e-15);
  EXPECT_NEAR(n.l1, -want * 2.0, 1e-14);
}

TEST(Residual, IntegratedFormRoundTripShrinks) {
  const auto p = representative_problem(0.5);
  double prev = 0.0;
  for (std::size_t n : {128u, 256u, 512u}) {
    const auto r = solve_picard(p, make_mesh(1.0, n), {.tol = 1e-13});
    const double e = integrated_form_gap(p, r.u);
    if (prev > 0.0) EXPECT_LT(e, prev);
    prev = e;
  }
}

// ---------------------------------------------------------------- initial condition

TEST(InitialCondition, ZeroFunction) {
  const auto res = check_initial_condition(GridFunction(make_mesh(1.0, 16)));
  EXPECT_TRUE(res.pass);
  ASSERT_EQ(res.values.size(), 3u);
  for (const auto& v : res.values) EXPECT_EQ(v.value, 0.0);
}

TEST(InitialCondition, PowerFunctionShrinks) {
  const double a = 0.2;
  double prev = INFINITY;
  for (std::size_t n : {16u, 64u, 256u}) {
    const auto m = make_mesh(1.0, n);
    const auto res = check_initial_condition(GridFunction::sample(m, [&](double t) { return std::pow(t, 2 * a); }));
    EXPECT_TRUE(res.pass);
    const double v = res.values[1].value;  // beta = 0.5
    // exact for this piecewise-linear interpolant: I^beta of the segment from 0 to t_1^{2a}
    EXPECT_NEAR(v, std::pow(m->node(1), 2 * a) * testing::power_rule(1, 0.5, m->node(1)) / m->node(1), 1e-14);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(InitialCondition, ConstantFunction) {
  const auto m = make_mesh(1.0, 100);
  const auto res = check_initial_condition(GridFunction::sample(m, [](double) { return 1.0; }));
  EXPECT_TRUE(res.pass);
  for (const auto& v : res.values) {
    EXPECT_NEAR(v.value, std::pow(0.01, v.beta) / std::tgamma(v.beta + 1), 1e-14);
  }
}

TEST(InitialCondition, RejectsBadBeta) {
  const GridFunction u(make_mesh(1.0, 4));
  EXPECT_THROW(check_initial_condition(u, {0.0}), std::invalid_argument);
  EXPECT_THROW(check_initial_condition(u, {1.5}), std::invalid_argument);
}

// ---------------------------------------------------------------- contraction

TEST(EmpiricalContraction, ConstantMapGivesZero) {
  EXPECT_EQ(empirical_contraction_rate(constant_f_problem(), 1.0, make_mesh(1.0, 64), 8, 1), 0.0);
}

TEST(EmpiricalContraction, ScalesWithLambda) {
  // F u - F v is linear in lambda; a fixed sampling box keeps the pairs identical
  const auto p = representative_problem(0.5);
  const auto m = make_mesh(1.0, 128);
  const double N = choose_N(p);
  const auto w = build_weights(m, p.order.two_alpha());
  const double box = 2.0 * apriori_bound(p, N);
  const double r1 = empirical_contraction_rate(p, N, w, 16, 42, box);
  const double r2 = empirical_contraction_rate(p.with_lambda(2 * p.lambda), N, w, 16, 42, box);
  EXPECT_GT(r1, 0.0);
  EXPECT_NEAR(r2 / r1, 2.0, 1e-9);
}

TEST(EmpiricalContraction, RepresentativeProblemContracts) {
  const auto p = representative_problem(0.5);
  const double N = choose_N(p);
  const auto m = make_mesh(1.0, 512);
  const double rate = empirical_contraction_rate(p, N, m, 32, 7);
  EXPECT_LT(rate, 1.0);
  EXPECT_LE(rate, contraction_constant(p, N) * 1.05);
  EXPECT_EQ(rate, empirical_contraction_rate(p, N, m, 32, 7));
}

TEST(EmpiricalContraction, RejectsNoTrials) {
  EXPECT_THROW(empirical_contraction_rate(constant_f_problem(), 1.0, make_mesh(1.0, 4), 0, 1),
               std::invalid_argument);
}

// ---------------------------------------------------------------- bound_check

TEST(BoundCheck, Examples) {
  const auto pc = constant_f_problem();
  const auto rc = solve_picard(pc, make_mesh(1.0, 128, 2.0));
  EXPECT_TRUE(bound_check(rc, pc, rc.N));

  const auto p = representative_problem(0.9);
  const auto r = solve_picard(p, make_mesh(1.0, 256));
  ASSERT_TRUE(r.converged);
  EXPECT_TRUE(bound_check(r, p, r.N));

  SolveReport bad = r;
  bad.u = scaled(r.u, 1000.0);
  EXPECT_FALSE(bound_check(bad, p, r.N));

  SolveReport unconverged = r;
  unconverged.converged = false;
  EXPECT_THROW(bound_check(unconverged, p, r.N), std::invalid_argument);
}

// ---------------------------------------------------------------- convergence_study

TEST(ConvergenceStudy, ClosedFormOnGradedMesh) {
  // The product rule reproduces t^{1/2} exactly, so the error sits at round-off.
  const auto t = convergence_study(constant_f_problem(), 64, 3, 2.0, {}, closed_form);
  EXPECT_TRUE(t.reference_is_exact);
  for (const auto& l : t.levels) {
    EXPECT_TRUE(l.converged);
    EXPECT_LE(l.error, 1e-12);
  }
}

TEST(ConvergenceStudy, GradedMeshSecondOrder) {
  const Conductivity f(ConductivityKind::affine_clamped, {1.0, 0.5}, 0.5, 0.5, 1.5);
  const ThermistorProblem p0(FractionalOrder(0.25), 1.0, 1.0, f, Source::constant(0.2, 1.0));
  const auto p = p0.with_lambda(0.5 * lambda_threshold(p0, choose_N(p0)));
  const auto t = convergence_study(p, 64, 3, 2.0, {.tol = 1e-13});
  EXPECT_FALSE(t.reference_is_exact);
  for (std::size_t l = 1; l < t.levels.size(); ++l) EXPECT_GE(t.levels[l].order, 1.8) << "level " << l;
}

TEST(ConvergenceStudy, UniformMeshSmallAlpha) {
  const Conductivity f(ConductivityKind::affine_clamped, {1.0, 0.5}, 0.5, 0.5, 1.5);
  const ThermistorProblem p0(FractionalOrder(0.1), 1.0, 1.0, f, Source::constant(0.2, 1.0));
  const auto p = p0.with_lambda(0.5 * lambda_threshold(p0, choose_N(p0)));
  const auto t = convergence_study(p, 64, 3, 1.0, {.tol = 1e-13});
  for (std::size_t l = 1; l < t.levels.size(); ++l) {
    EXPECT_GE(t.levels[l].interior_order, 0.9) << "level " << l;
    EXPECT_LT(t.levels[l].error, t.levels[l - 1].error);
  }
}

TEST(ConvergenceStudy, TwoLevelsGiveOneOrder) {
  const auto t = convergence_study(representative_problem(0.5), 32, 2);
  ASSERT_EQ(t.levels.size(), 2u);
  EXPECT_TRUE(std::isnan(t.levels[0].order));
  EXPECT_TRUE(std::isfinite(t.levels[1].order));
  EXPECT_THROW(convergence_study(representative_problem(0.5), 32, 1), std::invalid_argument);
}

}  // namespace
}  // namespace fractherm
