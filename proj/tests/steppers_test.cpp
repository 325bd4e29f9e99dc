#include "caputo/steppers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "caputo/corpus.hpp"
#include "caputo/error.hpp"
#include "caputo/log_math.hpp"
#include "test_support.hpp"

namespace caputo {
namespace {

TEST(BackwardEulerCoefficients, UnitStiffnessHalvesState) {
  EXPECT_EQ(backward_euler_coefficients(0.0, 0.5, 1.0).decay, 0.5);
  EXPECT_NEAR(backward_euler_coefficients(3.0, 0.5, std::exp(-3.0)).decay, 0.5, 1e-15);
}

TEST(BackwardEulerCoefficients, DecayVanishesForLargeExponent) {
  double previous = 1.0;
  for (double w = 0.0; w <= 800.0; w += 25.0) {
    const double decay = backward_euler_coefficients(w, 0.5, 1e-3).decay;
    EXPECT_LE(decay, previous);
    previous = decay;
  }
  EXPECT_EQ(previous, 0.0);
  EXPECT_NEAR(backward_euler_log_amplification(800.0, 1e-3), -(800.0 + std::log(1e-3)), 1e-12);
}

TEST(BackwardEulerCoefficients, ForcingMatchesDirectFormula) {
  for (double w : {-10.0, -1.0, 0.0, 2.0, 8.0}) {
    for (double h : {1e-4, 0.01, 0.5}) {
      const double q = 0.3;
      const double direct = h * std::exp(w * q) / (1.0 + h * std::exp(w));
      EXPECT_NEAR(backward_euler_coefficients(w, q, h).forcing_scale, direct, 1e-14 * direct);
    }
  }
}

TEST(BackwardEulerCoefficients, AmplificationStaysBelowOneAcrossRange) {
  for (double h : {1e-6, 1e-4, 1e-2, 1.0}) {
    for (double w = -50.0; w <= 750.0; w += 0.5) {
      const double log_amp = backward_euler_log_amplification(w, h);
      ASSERT_TRUE(std::isfinite(log_amp)) << w << " " << h;
      ASSERT_LT(log_amp, 0.0) << w << " " << h;
      const StepCoefficients s = backward_euler_coefficients(w, 0.5, h);
      ASSERT_GE(s.decay, 0.0);
      ASSERT_LE(s.decay, 1.0);
      ASSERT_TRUE(std::isfinite(s.forcing_scale));
    }
  }
}

TEST(TrapezoidalCoefficients, ZeroAndLimit) {
  EXPECT_NEAR(trapezoidal_coefficients(std::log(2.0), 0.5, 1.0).decay, 0.0, 1e-16);
  EXPECT_EQ(trapezoidal_coefficients(800.0, 0.5, 1e-3).decay, -1.0);
  for (double w = -50.0; w <= 750.0; w += 0.5) {
    const double d = trapezoidal_coefficients(w, 0.7, 1e-2).decay;
    ASSERT_LE(std::abs(d), 1.0) << w;
  }
}

// phi' = -lambda phi + b with constant b from y^(ceil(alpha)) == gamma. The
// recurrences have the closed forms
//   backward Euler: phi_n = (b/lambda) (1 - (1 + h lambda)^-n)
//   trapezoidal:    phi_n = (b/lambda) (1 - R^n), R = (1 - h lambda/2)/(1 + h lambda/2).
void check_constant_forcing(Method method, double lambda_h) {
  const double gamma = 1.7;
  const DerivativeProblem problem(0.5, 0.0, 1.0, [=](double) { return gamma; });
  const DiffusiveSystem system = build_system(problem, gauss_laguerre_rule(1));
  const double h = lambda_h / std::exp(system.w_plus[0]);
  const std::vector<double> ws = system.all_exponents();

  SolverState state = SolverState::initial(system, 0.0);
  for (int n = 1; n <= 1000; ++n) {
    const double t_next = n * h;
    state = method == Method::kBackwardEuler ? backward_euler_step(state, system, problem, t_next)
                                             : trapezoidal_step(state, system, problem, t_next);
    const double step = state.t - (n - 1) * h;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const long double lambda = std::exp(static_cast<long double>(ws[i]));
      const long double b = system.c * std::exp(static_cast<long double>(ws[i]) * system.q_d) * gamma;
      const long double lh = lambda * static_cast<long double>(h);
      const long double factor =
          method == Method::kBackwardEuler ? std::pow(1.0L + lh, -n) : std::pow((1.0L - lh / 2) / (1.0L + lh / 2), n);
      const long double expected = (b / lambda) * (1.0L - factor);
      ASSERT_NEAR(state.phi[i], static_cast<double>(expected), 1e-13)
          << "lambda_h=" << lambda_h << " node " << i << " step " << n << " h=" << step;
    }
  }
}

TEST(ConstantForcing, BackwardEulerMatchesClosedForm) {
  for (double lh : {1e-3, 1.0, 1e3}) check_constant_forcing(Method::kBackwardEuler, lh);
}

TEST(ConstantForcing, TrapezoidalMatchesClosedForm) {
  for (double lh : {1e-3, 1.0, 1e3}) check_constant_forcing(Method::kTrapezoidal, lh);
}

TEST(Step, RejectsNonPositiveStepAndNonFiniteForcing) {
  const DerivativeProblem good(0.5, 0.0, 1.0, [](double) { return 1.0; });
  const DiffusiveSystem system = build_system(good, gauss_laguerre_rule(3));
  const SolverState s0 = SolverState::initial(system, 0.0);
  EXPECT_THROW(backward_euler_step(s0, system, good, 0.0), InvalidStep);
  EXPECT_THROW(trapezoidal_step(s0, system, good, -0.1), InvalidStep);

  const DerivativeProblem bad(0.5, 0.0, 1.0, [](double t) { return t > 0.25 ? std::nan("") : 1.0; });
  try {
    evaluate_derivative(bad, gauss_laguerre_rule(3), TimeGrid::uniform(0.0, 1.0, 8));
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_NEAR(e.t(), 0.375, 1e-15);
  }
}

TEST(Step, StateIsBoundedByForcingEquilibrium) {
  // |phi_n(w)| <= M c e^{w (q - 1)} for backward Euler from a zero start
  // whenever |y^(ceil(alpha))| <= M.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double alpha = 0.05 + 0.9 * unit(rng) + (trial % 2);
    const double M = 0.1 + 10.0 * unit(rng);
    const double freq = 1.0 + 30.0 * unit(rng);
    const double phase = 6.0 * unit(rng);
    const DerivativeProblem problem(alpha, 0.0, 1.0, [=](double t) { return M * std::sin(freq * t + phase); });
    const std::size_t K = 1 + static_cast<std::size_t>(40 * unit(rng));
    DerivativeEvaluator eval(problem, gauss_laguerre_rule(K), Method::kBackwardEuler);
    const auto ws = eval.system().all_exponents();
    const std::size_t N = 50 + static_cast<std::size_t>(300 * unit(rng));
    for (std::size_t n = 1; n <= N; ++n) {
      eval.advance(static_cast<double>(n) / static_cast<double>(N));
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const double bound = M * eval.system().c * std::exp(ws[i] * (eval.system().q_d - 1.0));
        ASSERT_LE(std::abs(eval.state().phi[i]), bound * (1.0 + 1e-12)) << "trial " << trial;
      }
    }
  }
}

TEST(EvaluateDerivative, IsLinearInTheForcing) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double alpha = 0.1 + 0.8 * unit(rng) + (trial % 3);
    const double k1 = 10.0 * unit(rng), k2 = 10.0 * unit(rng), beta = -5.0 + 10.0 * unit(rng);
    auto g1 = [=](double t) { return std::cos(k1 * t); };
    auto g2 = [=](double t) { return t * t - k2 * t; };
    const DerivativeProblem p1(alpha, 0.0, 1.0, g1), p2(alpha, 0.0, 1.0, g2);
    const DerivativeProblem p12(alpha, 0.0, 1.0, [=](double t) { return beta * g1(t) + g2(t); });
    const QuadratureRule rule = gauss_laguerre_rule(15);
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 100);
    for (Method m : {Method::kBackwardEuler, Method::kTrapezoidal}) {
      const auto v1 = evaluate_derivative(p1, rule, grid, m);
      const auto v2 = evaluate_derivative(p2, rule, grid, m);
      const auto v12 = evaluate_derivative(p12, rule, grid, m);
      double scale = 0.0;
      for (std::size_t n = 0; n < v1.size(); ++n) scale = std::max({scale, std::abs(beta * v1[n]), std::abs(v2[n])});
      for (std::size_t n = 0; n < v1.size(); ++n) {
        ASSERT_NEAR(v12[n], beta * v1[n] + v2[n], 1e-10 * std::max(1.0, scale));
      }
    }
  }
}

TEST(EvaluateDerivative, ConstantFunctionGivesZero) {
  const TestFunction& f = corpus_function("const");
  const DerivativeProblem p = f.problem(0.4, 0.0, 1.0);
  for (double v : evaluate_derivative(p, gauss_laguerre_rule(20), TimeGrid::uniform(0.0, 1.0, 50))) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(EvaluateDerivative, StiffSystemStaysFinite) {
  const DerivativeProblem p = corpus_function("pow1").problem(0.9, 0.0, 1.0);
  const auto values = evaluate_derivative(p, gauss_laguerre_rule(60), TimeGrid::uniform(0.0, 1.0, 500));
  ASSERT_EQ(values.size(), 501u);
  EXPECT_EQ(values[0], 0.0);
  for (double v : values) ASSERT_TRUE(std::isfinite(v));
  // D^0.9 t at t = 1 is 1 / Gamma(1.1).
  EXPECT_NEAR(values.back(), 1.0 / std::tgamma(1.1), 1e-2);
}

TEST(EvaluateDerivative, ApproachesPowerRule) {
  const DerivativeProblem p = corpus_function("pow1").problem(0.5, 0.0, 1.0);
  const QuadratureRule rule = gauss_laguerre_rule(30);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t N : {100, 400, 1600}) {
    const double err =
        std::abs(evaluate_derivative(p, rule, TimeGrid::uniform(0.0, 1.0, N)).back() - testing::two_over_sqrt_pi());
    EXPECT_LT(err, previous);
    previous = err;
  }
  EXPECT_LT(previous, 2e-4);
}

TEST(EvaluateDerivative, TrapezoidalAndGradedGrids) {
  const DerivativeProblem p = corpus_function("pow2").problem(0.5, 0.0, 1.0);
  const double exact = *corpus_function("pow2").exact_caputo(0.5, 1.0);
  const QuadratureRule rule = gauss_laguerre_rule(30);
  const auto trap = evaluate_derivative(p, rule, TimeGrid::uniform(0.0, 1.0, 400), Method::kTrapezoidal);
  EXPECT_NEAR(trap.back(), exact, 1e-3);
  const auto graded = evaluate_derivative(p, rule, TimeGrid::graded(0.0, 1.0, 400, 2.0));
  EXPECT_EQ(graded[0], 0.0);
  EXPECT_NEAR(graded.back(), exact, 1e-2);
}

TEST(EvaluateDerivative, TruncationIsPrefixOfFullRule) {
  const DerivativeProblem p = corpus_function("sin").problem(0.6, 0.0, 1.0);
  const QuadratureRule rule = gauss_laguerre_rule(12);
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 40);
  EXPECT_EQ(evaluate_derivative(p, rule, grid, Method::kBackwardEuler, 12), evaluate_derivative(p, rule, grid));
  EXPECT_EQ(evaluate_derivative(p, rule, grid, Method::kBackwardEuler, 7),
            evaluate_derivative(p, truncate_rule(rule, 7), grid));
  EXPECT_THROW(evaluate_derivative(p, rule, grid, Method::kBackwardEuler, 13), InvalidParameter);
}

TEST(Evaluator, StateHasTwoEntriesPerNode) {
  const DerivativeProblem p = corpus_function("exp").problem(0.5, 0.0, 1.0);
  DerivativeEvaluator eval(p, gauss_laguerre_rule(9), Method::kTrapezoidal);
  for (int n = 1; n <= 1000; ++n) eval.advance(n / 1000.0);
  EXPECT_EQ(eval.state().phi.size(), 18u);
  EXPECT_EQ(eval.step_index(), 1000u);
  EXPECT_THROW(eval.advance(0.5), InvalidStep);
}

TEST(Assemble, MatchesDirectWeightedSum) {
  const DerivativeProblem p = corpus_function("pow2").problem(0.3, 0.0, 1.0);
  DerivativeEvaluator eval(p, gauss_laguerre_rule(6), Method::kBackwardEuler);
  double value = 0.0;
  for (int n = 1; n <= 10; ++n) value = eval.advance(n / 10.0);
  const DiffusiveSystem& s = eval.system();
  double direct = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double combined = std::exp(s.log_weights[k]) * std::exp(s.nodes[k]);
    direct += combined * (eval.state().phi[k] / s.q_d + eval.state().phi[s.size() + k] / (1.0 - s.q_d));
  }
  EXPECT_NEAR(value, direct, 1e-12 * std::abs(direct));
  EXPECT_NEAR(assemble(s, eval.state()), value, 1e-14 * std::abs(value));
}

}  // namespace
}  // namespace caputo

namespace caputo {
namespace {

TEST(Evaluator, CachedCoefficientsMatchFreshSteps) {
  const DerivativeProblem p = corpus_function("pow2").problem(0.5, 0.0, 1.0);
  const QuadratureRule rule = gauss_laguerre_rule(10);
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 3000);
  for (Method m : {Method::kBackwardEuler, Method::kTrapezoidal}) {
    const auto cached = evaluate_derivative(p, rule, grid, m);
    const DiffusiveSystem system = build_system(p, rule);
    SolverState s = SolverState::initial(system, 0.0);
    for (std::size_t n = 1; n < grid.size(); ++n) {
      s = m == Method::kBackwardEuler ? backward_euler_step(s, system, p, grid[n]) : trapezoidal_step(s, system, p, grid[n]);
      ASSERT_NEAR(assemble(system, s), cached[n], 1e-12 * std::abs(cached[n]) + 1e-15) << n;
    }
  }
}

}  // namespace
}  // namespace caputo
