#include "caputo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "caputo/error.hpp"
#include "caputo/oracle.hpp"

namespace caputo {

namespace {

void check_truth_tolerance(double truth_tol) {
  if (!(truth_tol >= kMinOracleTolerance && truth_tol <= 1e-8)) {
    std::ostringstream os;
    os << "truth tolerance must be in [" << kMinOracleTolerance << ", 1e-8], got " << truth_tol;
    throw InvalidParameter(os.str());
  }
}

double reference_truth(const DerivativeProblem& problem, double t, double truth_tol) {
  // reference_quadrature reports error <= 2 tol.
  return reference_quadrature(problem, t, std::max(kMinOracleTolerance, 0.5 * truth_tol));
}

}  // namespace

double exact_quadrature_sum(const DerivativeProblem& problem, const QuadratureRule& rule, double t,
                            double tol) {
  const double K = static_cast<double>(rule.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double combined = std::exp(rule.log_weight(k) + rule.node(k));
    const double node_tol = tol / (K * std::max(combined, std::numeric_limits<double>::min()));
    sum += combined * detail::scaled_phi_hat(problem, rule.node(k), t, node_tol);
  }
  return sum;
}

std::vector<double> ode_error_profile(const DerivativeProblem& problem, const QuadratureRule& rule,
                                      const TimeGrid& grid, Method method, double tol) {
  const std::vector<double> numeric = evaluate_derivative(problem, rule, grid, method);
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t n = 1; n < grid.size(); ++n) {
    out[n] = exact_quadrature_sum(problem, rule, grid[n], tol) - numeric[n];
  }
  return out;
}

std::vector<ErrorDecomposition> decompose_error(const DerivativeProblem& problem, const QuadratureRule& rule,
                                                const TimeGrid& grid, Method method, double truth_tol,
                                                std::optional<std::size_t> K_star) {
  check_truth_tolerance(truth_tol);
  const QuadratureRule used = K_star ? truncate_rule(rule, *K_star) : rule;
  const std::vector<double> numeric = evaluate_derivative(problem, used, grid, method);

  std::vector<ErrorDecomposition> out;
  out.reserve(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double t = grid[n];
    const double caputo = brute_force_caputo(problem, t, truth_tol);
    const double diffusive = reference_truth(problem, t, truth_tol);
    const double quadrature = exact_quadrature_sum(problem, used, t, 0.1 * truth_tol);
    out.push_back({n, t, caputo - numeric[n], diffusive - quadrature, quadrature - numeric[n], truth_tol});
  }
  return out;
}

double quadrature_error(const DerivativeProblem& problem, const QuadratureRule& rule, double t,
                        double truth_tol) {
  check_truth_tolerance(truth_tol);
  return reference_truth(problem, t, truth_tol) - exact_quadrature_sum(problem, rule, t, 0.1 * truth_tol);
}

SupNorms estimate_sup_norms(const DerivativeProblem& problem, std::size_t samples) {
  if (samples < 2) throw InvalidParameter("sup-norm estimate needs at least two samples");
  SupNorms norms{0.0, 0.0};
  const double step = problem.T() / static_cast<double>(samples - 1);
  auto fold = [](double current, double v) {
    return std::isfinite(v) ? std::max(current, std::abs(v)) : std::numeric_limits<double>::infinity();
  };
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = i + 1 == samples ? problem.end() : problem.a() + step * static_cast<double>(i);
    norms.d_upper = fold(norms.d_upper, problem.d_upper()(t));
    if (problem.has_d_upper_plus()) norms.d_upper_plus = fold(norms.d_upper_plus, problem.d_upper_plus()(t));
  }
  return norms;
}

LogValue lemma3_constant(const DerivativeProblem& problem, const QuadratureRule& rule, const SupNorms& norms) {
  const double q = q_d(problem.alpha());
  const double x = rule.largest_node();
  const double abs_sin = std::numbers::pi * std::abs(diffusive_coefficient(problem.alpha()));
  const double log_inner = log_add_exp(std::log(norms.d_upper_plus),
                                       std::log(2.0) + x / (1.0 - q) + std::log(norms.d_upper));
  return {std::log(abs_sin / (2.0 * std::numbers::pi)) + x * q / (1.0 - q) + log_inner};
}

LogValue lemma3_constant(const DerivativeProblem& problem, const QuadratureRule& rule) {
  if (!problem.has_d_upper_plus()) {
    throw UnsupportedOperation("the error constant needs y^(ceil(alpha)+1)");
  }
  return lemma3_constant(problem, rule, estimate_sup_norms(problem));
}

bool Lemma3Report::all_hold() const {
  if (!evaluable) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Lemma3Check& c) { return c.holds.value_or(false); });
}

Lemma3Report verify_lemma3_bound(const DerivativeProblem& problem, const QuadratureRule& rule,
                                 const std::vector<std::size_t>& N_list, double oracle_tol,
                                 std::optional<SupNorms> norms) {
  if (!norms && !problem.has_d_upper_plus()) {
    throw UnsupportedOperation("the error constant needs y^(ceil(alpha)+1)");
  }
  Lemma3Report report;
  report.constant = lemma3_constant(problem, rule, norms ? *norms : estimate_sup_norms(problem));
  report.evaluable = report.constant.representable();
  for (std::size_t N : N_list) {
    const TimeGrid grid = TimeGrid::uniform(problem.a(), problem.T(), N);
    const double h = problem.T() / static_cast<double>(N);
    const std::vector<double> r_ode = ode_error_profile(problem, rule, grid, Method::kBackwardEuler, oracle_tol);
    double worst = 0.0;
    for (double r : r_ode) worst = std::max(worst, std::abs(r));

    const LogValue bound{report.constant.log + std::log(problem.T()) + std::log(h)};
    Lemma3Check check{N, h, worst, bound.log10(), std::nullopt, std::nullopt};
    if (report.evaluable) {
      check.margin = bound.value() - worst;
      check.holds = worst <= bound.value();
    }
    report.checks.push_back(check);
  }
  return report;
}

LogValue composite_ode_term(double h, double q, std::size_t K) {
  if (!(h > 0.0) || !(q > 0.0 && q < 1.0)) throw InvalidParameter("need h > 0 and q in (0, 1)");
  return {std::log(h) + (1.0 + q) / (1.0 - q) * (4.0 * static_cast<double>(K) + 2.0)};
}

RateFit fit_rate(const std::vector<double>& xs, const std::vector<double>& errs) {
  if (xs.size() != errs.size()) throw InvalidParameter("fit_rate needs equally many resolutions and errors");
  const bool increasing = std::adjacent_find(xs.begin(), xs.end(), std::greater_equal<>()) == xs.end();
  const bool decreasing = std::adjacent_find(xs.begin(), xs.end(), std::less_equal<>()) == xs.end();
  if (!(increasing || decreasing) || std::any_of(xs.begin(), xs.end(), [](double x) { return !(x > 0.0); })) {
    throw InvalidParameter("fit_rate needs strictly monotone positive resolutions");
  }

  RateFit fit{};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (errs[i] > 0.0 && std::isfinite(errs[i])) {
      fit.xs.push_back(xs[i]);
      fit.errs.push_back(errs[i]);
    } else {
      ++fit.dropped;
      std::ostringstream os;
      os << "dropped resolution " << xs[i] << " with error " << errs[i];
      fit.warnings.push_back(os.str());
    }
  }
  if (fit.xs.size() < 3) {
    throw InsufficientData("rate fit needs at least 3 positive errors, got " + std::to_string(fit.xs.size()));
  }

  const double n = static_cast<double>(fit.xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < fit.xs.size(); ++i) {
    mean_x += std::log(fit.xs[i]);
    mean_y += std::log(fit.errs[i]);
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < fit.xs.size(); ++i) {
    const double dx = std::log(fit.xs[i]) - mean_x;
    const double dy = std::log(fit.errs[i]) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  const double residual = std::max(0.0, syy - fit.slope * sxy);
  fit.r2 = syy > 0.0 ? 1.0 - residual / syy : 1.0;
  return fit;
}

bool QuadratureDecay::strictly_decreasing() const {
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const double prev = entries[i - 1].abs_error;
    const double cur = entries[i].abs_error;
    if (prev < noise_floor && cur < noise_floor) continue;
    if (!(cur < prev)) return false;
  }
  return true;
}

bool QuadratureDecay::orders_non_decreasing() const {
  for (std::size_t i = 1; i < orders.size(); ++i) {
    if (orders[i].order < orders[i - 1].order) return false;
  }
  return true;
}

QuadratureDecay quadrature_decay_study(const DerivativeProblem& problem, double t,
                                       const std::vector<std::size_t>& K_list, double truth_tol) {
  check_truth_tolerance(truth_tol);
  if (K_list.empty() || std::adjacent_find(K_list.begin(), K_list.end(), std::greater_equal<>()) != K_list.end()) {
    throw InvalidParameter("K list must be non-empty and strictly increasing");
  }
  QuadratureDecay study;
  study.noise_floor = 10.0 * truth_tol;
  const double truth = reference_truth(problem, t, truth_tol);
  for (std::size_t K : K_list) {
    const QuadratureRule rule = gauss_laguerre_rule(K);
    study.entries.push_back({K, std::abs(truth - exact_quadrature_sum(problem, rule, t, 0.1 * truth_tol))});
  }
  for (const auto& coarse : study.entries) {
    for (const auto& fine : study.entries) {
      if (fine.K != 2 * coarse.K) continue;
      if (coarse.abs_error < study.noise_floor || fine.abs_error < study.noise_floor) continue;
      study.orders.push_back({coarse.K, std::log(coarse.abs_error / fine.abs_error) / std::log(2.0)});
    }
  }
  return study;
}

ConvergenceStudy convergence_study(const DerivativeProblem& problem, const QuadratureRule& rule,
                                   const std::vector<std::size_t>& N_list, Method method,
                                   const std::function<double(double)>& truth,
                                   std::optional<std::size_t> K_star) {
  ConvergenceStudy study;
  std::vector<double> hs;
  for (std::size_t N : N_list) {
    const TimeGrid grid = TimeGrid::uniform(problem.a(), problem.T(), N);
    const std::vector<double> values = evaluate_derivative(problem, rule, grid, method, K_star);
    double worst = 0.0;
    for (std::size_t n = 1; n < grid.size(); ++n) worst = std::max(worst, std::abs(truth(grid[n]) - values[n]));
    study.N.push_back(N);
    study.max_error.push_back(worst);
    hs.push_back(problem.T() / static_cast<double>(N));
  }
  study.fit = fit_rate(hs, study.max_error);
  return study;
}

}  // namespace caputo
