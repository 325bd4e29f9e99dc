#include "caputo/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "caputo/corpus.hpp"
#include "caputo/error.hpp"
#include "caputo/oracle.hpp"
#include "test_support.hpp"

namespace caputo {
namespace {

TEST(Decomposition, IdentityBetweenIndependentOracles) {
  const DerivativeProblem p = corpus_function("pow2").problem(0.5, 0.0, 1.0);
  const double tol = 1e-9;
  const auto rows = decompose_error(p, gauss_laguerre_rule(20), TimeGrid::uniform(0.0, 1.0, 40),
                                    Method::kBackwardEuler, tol);
  ASSERT_EQ(rows.size(), 41u);
  EXPECT_EQ(rows[0].r_total, 0.0);
  EXPECT_EQ(rows[0].r_q, 0.0);
  EXPECT_EQ(rows[0].r_ode, 0.0);
  for (const auto& r : rows) EXPECT_LE(std::abs(r.r_total - (r.r_q + r.r_ode)), 10.0 * tol) << r.n;
}

TEST(Decomposition, ZeroForcingGivesZeroRows) {
  const DerivativeProblem p(0.7, 0.0, 1.0, [](double) { return 0.0; });
  for (const auto& r : decompose_error(p, gauss_laguerre_rule(8), TimeGrid::uniform(0.0, 1.0, 10),
                                       Method::kTrapezoidal, 1e-10)) {
    EXPECT_EQ(r.r_total, 0.0);
    EXPECT_EQ(r.r_q, 0.0);
    EXPECT_EQ(r.r_ode, 0.0);
  }
}

TEST(Decomposition, QuadratureErrorDoesNotDependOnGrid) {
  const DerivativeProblem p = corpus_function("pow2").problem(0.3, 0.0, 1.0);
  const QuadratureRule rule = gauss_laguerre_rule(20);
  const auto coarse = decompose_error(p, rule, TimeGrid::uniform(0.0, 1.0, 10), Method::kBackwardEuler, 1e-9);
  const auto fine = decompose_error(p, rule, TimeGrid::uniform(0.0, 1.0, 40), Method::kBackwardEuler, 1e-9);
  for (std::size_t n = 0; n <= 10; ++n) EXPECT_NEAR(coarse[n].r_q, fine[4 * n].r_q, 1e-8);
}

TEST(Decomposition, RejectsToleranceOutsideRange) {
  const DerivativeProblem p = corpus_function("pow1").problem(0.5, 0.0, 1.0);
  EXPECT_THROW(decompose_error(p, gauss_laguerre_rule(4), TimeGrid::uniform(0.0, 1.0, 4), Method::kBackwardEuler, 1e-6),
               InvalidParameter);
}

TEST(QuadratureError, MatchesHighPrecisionValues) {
  // y = t^2, alpha = 0.5, t = 1; 400-digit evaluation of the exact
  // derivative minus the K-point sum with exactly integrated phi.
  const DerivativeProblem p = corpus_function("pow2").problem(0.5, 0.0, 1.0);
  const std::pair<std::size_t, double> expected[] = {
      {5, 0.006547898291}, {10, -0.0009402698889}, {20, -3.936866416e-5}, {40, -4.520638299e-6}};
  for (auto [K, value] : expected) {
    EXPECT_NEAR(quadrature_error(p, gauss_laguerre_rule(K), 1.0, 1e-12), value, 1e-9 * std::abs(value) + 1e-10)
        << "K=" << K;
  }
}

TEST(QuadratureDecay, StudyOnSmoothPower) {
  const DerivativeProblem p = corpus_function("pow2").problem(0.5, 0.0, 1.0);
  const QuadratureDecay d = quadrature_decay_study(p, 1.0, {5, 10, 20, 40}, 1e-12);
  ASSERT_EQ(d.entries.size(), 4u);
  EXPECT_TRUE(d.strictly_decreasing());
  ASSERT_EQ(d.orders.size(), 3u);
  const double orders[] = {2.7998851, 4.5779553, 3.1224494};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(d.orders[i].order, orders[i], 1e-4);
  EXPECT_FALSE(d.orders_non_decreasing());
}

TEST(QuadratureDecay, ZeroForcingIsBelowNoiseFloor) {
  const DerivativeProblem p(0.5, 0.0, 1.0, [](double) { return 0.0; });
  const QuadratureDecay d = quadrature_decay_study(p, 1.0, {2, 4, 8}, 1e-10);
  for (const auto& e : d.entries) EXPECT_EQ(e.abs_error, 0.0);
  EXPECT_TRUE(d.orders.empty());
  EXPECT_THROW(quadrature_decay_study(p, 1.0, {4, 2}, 1e-10), InvalidParameter);
}

TEST(QuadratureError, TruncatedRuleIsSupported) {
  const DerivativeProblem p = corpus_function("pow1").problem(0.5, 0.0, 1.0);
  const QuadratureRule rule = gauss_laguerre_rule(20);
  const double full = quadrature_error(p, rule, 1.0, 1e-11);
  const double cut = quadrature_error(p, truncate_rule(rule, 5), 1.0, 1e-11);
  EXPECT_TRUE(std::isfinite(cut));
  EXPECT_GT(std::abs(cut), std::abs(full));
  // The dropped tail nodes carry negligible weight.
  EXPECT_NEAR(quadrature_error(p, truncate_rule(rule, 18), 1.0, 1e-11), full, 1e-10);
}

TEST(ErrorConstant, SingleNodeLinearFunction) {
  const DerivativeProblem p = corpus_function("pow1").problem(0.5, 0.0, 1.0);
  const QuadratureRule rule = gauss_laguerre_rule(1);
  const double expected = std::exp(3.0) / std::numbers::pi;
  EXPECT_NEAR(lemma3_constant(p, rule, {1.0, 0.0}).value(), expected, 1e-12 * expected);
  EXPECT_NEAR(lemma3_constant(p, rule).value(), expected, 1e-12 * expected);
  EXPECT_NEAR(expected, 6.393424971960192, 1e-12);
}

TEST(ErrorConstant, ZeroNormsAndGeneralFormula) {
  const DerivativeProblem p = corpus_function("pow2").problem(0.5, 0.0, 1.0);
  EXPECT_TRUE(lemma3_constant(p, gauss_laguerre_rule(3), {0.0, 0.0}).is_zero());

  const QuadratureRule rule = gauss_laguerre_rule(10);
  const double x = rule.largest_node(), q = 0.5;
  const double expected_log = std::log(1.0 / (2.0 * std::numbers::pi)) + x * q / (1 - q) +
                              std::log(2.0 + 2.0 * std::exp(x / (1 - q)) * 2.0);
  const LogValue c = lemma3_constant(p, rule, {2.0, 2.0});
  EXPECT_NEAR(c.log, expected_log, 1e-12 * expected_log);
}

TEST(ErrorConstant, LogFormSurvivesOverflow) {
  const DerivativeProblem p = corpus_function("pow2").problem(0.9, 0.0, 1.0);
  const LogValue c = lemma3_constant(p, gauss_laguerre_rule(60));
  EXPECT_TRUE(std::isfinite(c.log));
  EXPECT_FALSE(c.representable());
  EXPECT_GE(c.scientific().mantissa, 1.0);
  EXPECT_LT(c.scientific().mantissa, 10.0);
}

TEST(ErrorConstant, NeedsHigherDerivative) {
  const DerivativeProblem p(0.5, 0.0, 1.0, [](double t) { return t; });
  EXPECT_THROW(lemma3_constant(p, gauss_laguerre_rule(2)), UnsupportedOperation);
  EXPECT_NO_THROW(lemma3_constant(p, gauss_laguerre_rule(2), {1.0, 1.0}));
}

TEST(ErrorBound, HoldsForSmallRules) {
  const DerivativeProblem p = corpus_function("pow2").problem(0.5, 0.0, 1.0);
  for (std::size_t K : {1, 2, 3}) {
    const Lemma3Report r = verify_lemma3_bound(p, gauss_laguerre_rule(K), {16, 64});
    EXPECT_TRUE(r.evaluable);
    EXPECT_TRUE(r.all_hold()) << K;
    ASSERT_EQ(r.checks.size(), 2u);
    EXPECT_NEAR(r.checks[0].log10_bound - r.checks[1].log10_bound, std::log10(4.0), 1e-12);
  }
}

TEST(ErrorBound, UnrepresentableBoundReportsLogOnly) {
  const DerivativeProblem p = corpus_function("pow2").problem(0.9, 0.0, 1.0);
  const Lemma3Report r = verify_lemma3_bound(p, gauss_laguerre_rule(60), {16});
  EXPECT_FALSE(r.evaluable);
  EXPECT_FALSE(r.checks[0].holds.has_value());
  EXPECT_TRUE(std::isfinite(r.checks[0].log10_bound));
  EXPECT_TRUE(std::isfinite(r.checks[0].max_abs_r_ode));
}

TEST(SupNorms, SampledValues) {
  const SupNorms n = estimate_sup_norms(corpus_function("pow3").problem(0.5, 0.0, 2.0));
  EXPECT_NEAR(n.d_upper, 12.0, 1e-12);
  EXPECT_NEAR(n.d_upper_plus, 12.0, 1e-12);
}

TEST(CompositeTerm, LogForm) {
  const LogValue v = composite_ode_term(0.01, 0.5, 2);
  EXPECT_NEAR(v.log, std::log(0.01) + 3.0 * 10.0, 1e-12);
  EXPECT_THROW(composite_ode_term(0.0, 0.5, 2), InvalidParameter);
}

TEST(FitRate, ExactPowerLaws) {
  const RateFit first = fit_rate({0.1, 0.05, 0.025}, {0.2, 0.1, 0.05});
  EXPECT_NEAR(first.slope, 1.0, 1e-12);
  EXPECT_NEAR(first.r2, 1.0, 1e-12);
  const RateFit second = fit_rate({1, 2, 4, 8}, {1.0, 0.25, 0.0625, 0.015625});
  EXPECT_NEAR(second.slope, -2.0, 1e-12);
  EXPECT_NEAR(second.intercept, 0.0, 1e-12);
}

TEST(FitRate, DropsNonPositiveErrors) {
  const RateFit f = fit_rate({1, 2, 4, 8}, {1.0, 0.0, 0.25, 0.125});
  EXPECT_EQ(f.dropped, 1u);
  EXPECT_FALSE(f.warnings.empty());
  EXPECT_EQ(f.xs.size(), 3u);
  EXPECT_THROW(fit_rate({1, 2, 4}, {1.0, 0.0, 0.5}), InsufficientData);
  EXPECT_THROW(fit_rate({1, 2}, {1.0, 0.5}), InsufficientData);
  EXPECT_THROW(fit_rate({1, 3, 2}, {1.0, 0.5, 0.2}), InvalidParameter);
  EXPECT_THROW(fit_rate({0, 1, 2}, {1.0, 0.5, 0.2}), InvalidParameter);
}

TEST(FitRate, RecoversSlopeOfNoisyData) {
  std::vector<double> xs, errs;
  for (int i = 0; i < 8; ++i) {
    xs.push_back(std::pow(2.0, -i));
    errs.push_back(3.0 * std::pow(xs.back(), 1.5) * (1.0 + 0.01 * ((i % 2) ? 1 : -1)));
  }
  EXPECT_NEAR(fit_rate(xs, errs).slope, 1.5, 0.01);
}

TEST(Convergence, BackwardEulerFirstOrderOdeError) {
  // y^(ceil(alpha)) vanishes at a, so no start-up layer pollutes the
  // grid maximum at coarse N.
  const DerivativeProblem p = corpus_function("pow2").problem(0.5, 0.0, 1.0);
  const QuadratureRule rule = gauss_laguerre_rule(8);
  const auto quad_sum = [&](double t) { return t == 0.0 ? 0.0 : exact_quadrature_sum(p, rule, t, 1e-12); };
  const ConvergenceStudy s = convergence_study(p, rule, {50, 100, 200, 400}, Method::kBackwardEuler, quad_sum);
  ASSERT_EQ(s.max_error.size(), 4u);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LT(s.max_error[i], s.max_error[i - 1]);
  EXPECT_NEAR(s.fit.slope, 1.0, 0.15);
}

TEST(OdeProfile, MatchesDecompositionColumn) {
  const DerivativeProblem p = corpus_function("pow2").problem(0.5, 0.0, 1.0);
  const QuadratureRule rule = gauss_laguerre_rule(6);
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 16);
  const auto ode = ode_error_profile(p, rule, grid, Method::kBackwardEuler, 1e-11);
  const auto rows = decompose_error(p, rule, grid, Method::kBackwardEuler, 1e-11);
  for (std::size_t n = 0; n < ode.size(); ++n) EXPECT_NEAR(ode[n], rows[n].r_ode, 1e-10);
}

}  // namespace
}  // namespace caputo
