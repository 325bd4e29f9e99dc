#include "caputo/steppers.hpp"

#include <cmath>
#include <limits>

#include "caputo/error.hpp"
#include "caputo/log_math.hpp"

namespace caputo {

namespace {

void require_positive_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidStep("time step must be positive, got " + std::to_string(h));
  }
}

double forcing_at(const DerivativeProblem& problem, double t) {
  const double g = problem.d_upper()(t);
  if (!std::isfinite(g)) {
    throw EvaluationError("y^(ceil(alpha)) is not finite at t = " + std::to_string(t), t);
  }
  return g;
}

double exponent_at(const DiffusiveSystem& system, std::size_t i) {
  const std::size_t K = system.size();
  return i < K ? system.w_minus[i] : system.w_plus[i - K];
}

// One step for every node with coefficients recomputed from h.
SolverState step(const SolverState& state, const DiffusiveSystem& system, Method method,
                 double t_next, double forcing) {
  const double h = t_next - state.t;
  SolverState next{state.n + 1, t_next, std::vector<double>(state.phi.size())};
  for (std::size_t i = 0; i < state.phi.size(); ++i) {
    const StepCoefficients k = step_coefficients(method, exponent_at(system, i), system.q_d, h);
    next.phi[i] = k.decay * state.phi[i] + k.forcing_scale * forcing;
  }
  return next;
}

}  // namespace

double backward_euler_log_amplification(double w, double h) {
  require_positive_step(h);
  return -softplus(w + std::log(h));
}

StepCoefficients backward_euler_coefficients(double w, double q, double h) {
  require_positive_step(h);
  const double log_h = std::log(h);
  const double z = w + log_h;
  // 1 / (1 + e^z) written so that neither branch overflows.
  const double decay = z <= 0.0 ? 1.0 / (1.0 + std::exp(z)) : std::exp(-z) / (1.0 + std::exp(-z));
  return {decay, std::exp(log_h + w * q - softplus(z))};
}

StepCoefficients trapezoidal_coefficients(double w, double q, double h) {
  require_positive_step(h);
  const double log_half_h = std::log(0.5 * h);
  const double u = w + log_half_h;
  // (1 - e^u) / (1 + e^u) = -tanh(u / 2), saturating at -1 as w grows.
  return {-std::tanh(0.5 * u), std::exp(log_half_h + w * q - softplus(u))};
}

StepCoefficients step_coefficients(Method method, double w, double q, double h) {
  return method == Method::kBackwardEuler ? backward_euler_coefficients(w, q, h)
                                          : trapezoidal_coefficients(w, q, h);
}

SolverState SolverState::initial(const DiffusiveSystem& system, double a) {
  return SolverState{0, a, std::vector<double>(2 * system.size(), 0.0)};
}

SolverState backward_euler_step(const SolverState& state, const DiffusiveSystem& system,
                                const DerivativeProblem& problem, double t_next) {
  require_positive_step(t_next - state.t);
  return step(state, system, Method::kBackwardEuler, t_next, system.c * forcing_at(problem, t_next));
}

SolverState trapezoidal_step(const SolverState& state, const DiffusiveSystem& system,
                             const DerivativeProblem& problem, double t_next) {
  require_positive_step(t_next - state.t);
  const double forcing = system.c * (forcing_at(problem, state.t) + forcing_at(problem, t_next));
  return step(state, system, Method::kTrapezoidal, t_next, forcing);
}

double assemble(const DiffusiveSystem& system, const SolverState& state) {
  const std::size_t K = system.size();
  const double inv_q = 1.0 / system.q_d;
  const double inv_p = 1.0 / (1.0 - system.q_d);
  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    sum += std::exp(system.log_assembly_weight(k)) * (inv_q * state.phi[k] + inv_p * state.phi[K + k]);
  }
  return sum;
}

DerivativeEvaluator::DerivativeEvaluator(const DerivativeProblem& problem, const QuadratureRule& rule,
                                         Method method, std::optional<std::size_t> K_star)
    : problem_(problem),
      method_(method),
      system_(build_system(problem, K_star ? truncate_rule(rule, *K_star) : rule)),
      state_(SolverState::initial(system_, problem.a())) {
  const std::size_t K = system_.size();
  const double inv_q = 1.0 / system_.q_d;
  const double inv_p = 1.0 / (1.0 - system_.q_d);
  assembly_.resize(2 * K);
  for (std::size_t k = 0; k < K; ++k) {
    const double combined = std::exp(system_.log_assembly_weight(k));
    assembly_[k] = combined * inv_q;
    assembly_[K + k] = combined * inv_p;
  }
  coefficients_.resize(2 * K);
  if (method_ == Method::kTrapezoidal) forcing_prev_ = forcing_at(problem_, problem_.a());
}

void DerivativeEvaluator::refresh_coefficients(double h, double t_next) {
  // Grid points computed as a + T n / N give steps that differ by the
  // rounding of the points themselves; those are treated as the same step.
  const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(t_next);
  if (cached_h_ > 0.0 && std::abs(h - cached_h_) <= 1e-13 * cached_h_ + rounding) return;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    coefficients_[i] = step_coefficients(method_, exponent_at(system_, i), system_.q_d, h);
  }
  cached_h_ = h;
}

double DerivativeEvaluator::advance(double t_next) {
  const double h = t_next - state_.t;
  require_positive_step(h);
  refresh_coefficients(h, t_next);

  const double g_next = forcing_at(problem_, t_next);
  const double forcing =
      system_.c * (method_ == Method::kBackwardEuler ? g_next : forcing_prev_ + g_next);
  forcing_prev_ = g_next;

  double value = 0.0;
  for (std::size_t i = 0; i < state_.phi.size(); ++i) {
    const StepCoefficients& k = coefficients_[i];
    state_.phi[i] = k.decay * state_.phi[i] + k.forcing_scale * forcing;
    value += assembly_[i] * state_.phi[i];
  }
  state_.t = t_next;
  ++state_.n;
  if (!std::isfinite(value)) {
    throw EvaluationError("derivative approximation is not finite at t = " + std::to_string(t_next), t_next);
  }
  return value;
}

std::vector<double> evaluate_derivative(const DerivativeProblem& problem, const QuadratureRule& rule,
                                        const TimeGrid& grid, Method method,
                                        std::optional<std::size_t> K_star) {
  grid.check_matches(problem);
  DerivativeEvaluator evaluator(problem, rule, method, K_star);
  std::vector<double> out(grid.size());
  out[0] = 0.0;
  for (std::size_t n = 1; n < grid.size(); ++n) out[n] = evaluator.advance(grid[n]);
  return out;
}

}  // namespace caputo
