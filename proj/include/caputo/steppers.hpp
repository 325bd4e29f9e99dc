#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "caputo/diffusive.hpp"
#include "caputo/quadrature.hpp"

namespace caputo {

enum class Method { kBackwardEuler, kTrapezoidal };

/// Per-node one-step map phi_{n+1} = decay * phi_n + forcing_scale * F,
/// where F is c y^(ceil(alpha))(t_{n+1}) for backward Euler and
/// c (y^(ceil(alpha))(t_n) + y^(ceil(alpha))(t_{n+1})) for the trapezoidal
/// rule. Both coefficients are formed from logarithms so that e^w is never
/// materialized.
struct StepCoefficients {
  double decay;
  double forcing_scale;
};

/// decay = 1 / (1 + h e^w), forcing_scale = h e^{w q} / (1 + h e^w).
StepCoefficients backward_euler_coefficients(double w, double q, double h);

/// -ln(1 + h e^w), the log of the backward Euler amplification factor.
/// Strictly negative for every finite w and h > 0 whenever the factor
/// itself would round to 1 or flush to 0 in double precision.
double backward_euler_log_amplification(double w, double h);

/// decay = (1 - h e^w / 2) / (1 + h e^w / 2),
/// forcing_scale = (h / 2) e^{w q} / (1 + h e^w / 2).
StepCoefficients trapezoidal_coefficients(double w, double q, double h);

StepCoefficients step_coefficients(Method method, double w, double q, double h);

/// State of the 2K auxiliary equations at grid index n. This is all the
/// scheme carries from one step to the next.
struct SolverState {
  std::size_t n = 0;
  double t = 0.0;
  /// phi at W_- (first K entries) then W_+ (last K entries).
  std::vector<double> phi;

  /// All-zero state at t = a.
  static SolverState initial(const DiffusiveSystem& system, double a);
};

SolverState backward_euler_step(const SolverState& state, const DiffusiveSystem& system,
                                const DerivativeProblem& problem, double t_next);

SolverState trapezoidal_step(const SolverState& state, const DiffusiveSystem& system,
                             const DerivativeProblem& problem, double t_next);

/// sum_k a_k e^{x_k} ((1/q) phi_k^- + (1/(1-q)) phi_k^+) for a state.
double assemble(const DiffusiveSystem& system, const SolverState& state);

/// Streaming form of evaluate_derivative: holds one SolverState, advances it
/// one grid point at a time and returns the current derivative value.
/// Step coefficients are cached and reused while the step size repeats.
class DerivativeEvaluator {
 public:
  DerivativeEvaluator(const DerivativeProblem& problem, const QuadratureRule& rule, Method method,
                      std::optional<std::size_t> K_star = std::nullopt);

  /// Advance to t_next > t() and return the approximation at t_next.
  double advance(double t_next);

  double t() const { return state_.t; }
  std::size_t step_index() const { return state_.n; }
  const SolverState& state() const { return state_; }
  const DiffusiveSystem& system() const { return system_; }

 private:
  void refresh_coefficients(double h, double t_next);

  const DerivativeProblem& problem_;
  Method method_;
  DiffusiveSystem system_;
  SolverState state_;
  std::vector<double> assembly_;
  std::vector<StepCoefficients> coefficients_;
  double cached_h_ = 0.0;
  double forcing_prev_ = 0.0;
};

/// Derivative approximation at every grid point; result[0] = 0. Single pass,
/// O(N K) time, O(K) working state.
std::vector<double> evaluate_derivative(const DerivativeProblem& problem, const QuadratureRule& rule,
                                        const TimeGrid& grid, Method method = Method::kBackwardEuler,
                                        std::optional<std::size_t> K_star = std::nullopt);

}  // namespace caputo
