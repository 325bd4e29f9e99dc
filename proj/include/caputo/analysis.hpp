#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "caputo/diffusive.hpp"
#include "caputo/log_math.hpp"
#include "caputo/quadrature.hpp"
#include "caputo/steppers.hpp"

namespace caputo {

/// Split of the total error at one grid point into its quadrature and ODE
/// parts. r_total comes from the Caputo-definition oracle, r_q from the
/// diffusive-integral oracle, so r_total - (r_q + r_ode) measures the
/// disagreement of two independent truths.
struct ErrorDecomposition {
  std::size_t n;
  double t;
  double r_total;
  double r_q;
  double r_ode;
  double oracle_tol;
};

std::vector<ErrorDecomposition> decompose_error(const DerivativeProblem& problem, const QuadratureRule& rule,
                                                const TimeGrid& grid, Method method, double truth_tol,
                                                std::optional<std::size_t> K_star = std::nullopt);

/// sum_k a_k (phi_hat(x_k, t_n) - phi_hat_{k,n}) at every grid point, with
/// the exact phi_hat from the oracle to absolute accuracy `tol`.
std::vector<double> ode_error_profile(const DerivativeProblem& problem, const QuadratureRule& rule,
                                      const TimeGrid& grid, Method method, double tol);

/// sum_k a_k phi_hat(x_k, t) with exact phi_hat, absolute error <= tol.
double exact_quadrature_sum(const DerivativeProblem& problem, const QuadratureRule& rule, double t,
                            double tol);

/// Quadrature error at t for any rule (full or truncated), against
/// reference_quadrature.
double quadrature_error(const DerivativeProblem& problem, const QuadratureRule& rule, double t,
                        double truth_tol);

struct SupNorms {
  double d_upper;
  double d_upper_plus;
};

/// max |y^(ceil(alpha))| and max |y^(ceil(alpha)+1)| over `samples`
/// equispaced points of [a, a + T]. An estimate, not a certified bound.
SupNorms estimate_sup_norms(const DerivativeProblem& problem, std::size_t samples = 10001);

/// Backward Euler error constant
///   C(K) = |sin(alpha pi)| / (2 pi) e^{x_K q/(1-q)}
///          (|y^(ceil(alpha)+1)|_inf + 2 e^{x_K/(1-q)} |y^(ceil(alpha))|_inf)
/// with x_K the largest node of `rule`, held in log form.
LogValue lemma3_constant(const DerivativeProblem& problem, const QuadratureRule& rule, const SupNorms& norms);

/// As above with sampled norms; throws UnsupportedOperation when the
/// problem has no y^(ceil(alpha)+1).
LogValue lemma3_constant(const DerivativeProblem& problem, const QuadratureRule& rule);

struct Lemma3Check {
  std::size_t N;
  double h;
  double max_abs_r_ode;
  /// log10 of C(K) T h
  double log10_bound;
  /// bound - max|r_ode|; only set when the bound is a finite double.
  std::optional<double> margin;
  std::optional<bool> holds;
};

struct Lemma3Report {
  LogValue constant;
  /// False when C(K) T h leaves the double range: checks carry the
  /// measurements and the log bound only.
  bool evaluable;
  std::vector<Lemma3Check> checks;
  bool all_hold() const;
};

/// max_n |r_ode| <= C(K) T h on uniform grids with each N in N_list,
/// backward Euler. Sup norms are sampled unless given.
Lemma3Report verify_lemma3_bound(const DerivativeProblem& problem, const QuadratureRule& rule,
                                 const std::vector<std::size_t>& N_list, double oracle_tol = 1e-12,
                                 std::optional<SupNorms> norms = std::nullopt);

/// ln of h exp((1 + q)/(1 - q) (4K + 2)), the ODE term of the composite
/// error bound up to its constant.
LogValue composite_ode_term(double h, double q, std::size_t K);

/// Least-squares slope of ln err against ln x.
struct RateFit {
  std::vector<double> xs;
  std::vector<double> errs;
  double slope;
  double intercept;
  double r2;
  std::size_t dropped;
  std::vector<std::string> warnings;
};

/// Non-positive errors are dropped with a warning; throws InsufficientData
/// when fewer than 3 points survive and InvalidParameter unless xs is
/// strictly monotone and positive.
RateFit fit_rate(const std::vector<double>& xs, const std::vector<double>& errs);

struct QuadratureDecay {
  struct Entry {
    std::size_t K;
    double abs_error;
  };
  struct LocalOrder {
    std::size_t K;
    /// ln(e_K / e_{2K}) / ln 2
    double order;
  };
  std::vector<Entry> entries;
  /// One per K in the list whose double 2K is also in the list, both
  /// errors above the noise floor.
  std::vector<LocalOrder> orders;
  double noise_floor;

  /// |r_q| strictly decreasing over the entries above the noise floor.
  bool strictly_decreasing() const;
  bool orders_non_decreasing() const;
};

/// |r_q(K)| at time t for each K (increasing); errors below 10 truth_tol are
/// excluded from the order statistics.
QuadratureDecay quadrature_decay_study(const DerivativeProblem& problem, double t,
                                       const std::vector<std::size_t>& K_list, double truth_tol);

/// Max over the grid of |truth(t_n) - approximation_n| for uniform grids of
/// each N, and the fitted rate against h.
struct ConvergenceStudy {
  std::vector<std::size_t> N;
  std::vector<double> max_error;
  RateFit fit;
};

ConvergenceStudy convergence_study(const DerivativeProblem& problem, const QuadratureRule& rule,
                                   const std::vector<std::size_t>& N_list, Method method,
                                   const std::function<double(double)>& truth,
                                   std::optional<std::size_t> K_star = std::nullopt);

}  // namespace caputo
