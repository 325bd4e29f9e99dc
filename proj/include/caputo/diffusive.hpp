#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "caputo/quadrature.hpp"

namespace caputo {

using ScalarFunction = std::function<double(double)>;

/// Orders closer than this to an integer are rejected.
inline constexpr double kIntegerOrderTolerance = 1e-12;

/// Throws InvalidOrder unless alpha > 0 and alpha is not (numerically) an
/// integer.
void validate_order(double alpha);

/// ceil(alpha), the number of classical derivatives the Caputo operator
/// consumes.
int integer_order(double alpha);

/// q_D = alpha - ceil(alpha) + 1, in (0, 1).
double q_d(double alpha);

/// (-1)^floor(alpha) sin(alpha pi) / pi, the forcing prefactor of the
/// auxiliary equations.
double diffusive_coefficient(double alpha);

/// Caputo derivative of order `alpha` on [a, a + T]. The caller supplies
/// y^(ceil(alpha)) and, for the backward Euler error constant only,
/// y^(ceil(alpha) + 1).
class DerivativeProblem {
 public:
  DerivativeProblem(double alpha, double a, double T, ScalarFunction d_upper,
                    ScalarFunction d_upper_plus = {});

  double alpha() const { return alpha_; }
  double a() const { return a_; }
  double T() const { return T_; }
  double end() const { return a_ + T_; }
  int integer_order() const { return caputo::integer_order(alpha_); }

  const ScalarFunction& d_upper() const { return d_upper_; }
  const ScalarFunction& d_upper_plus() const { return d_upper_plus_; }
  bool has_d_upper_plus() const { return static_cast<bool>(d_upper_plus_); }

 private:
  double alpha_;
  double a_;
  double T_;
  ScalarFunction d_upper_;
  ScalarFunction d_upper_plus_;
};

/// Strictly increasing t_0 = a < t_1 < ... < t_N = a + T.
class TimeGrid {
 public:
  static TimeGrid uniform(double a, double T, std::size_t N);
  /// t_n = a + T (n / N)^exponent; exponent >= 1 clusters points near a.
  static TimeGrid graded(double a, double T, std::size_t N, double exponent);
  /// Arbitrary points; flagged uniform when the spacing is constant to
  /// 1e-12 T.
  static TimeGrid from_points(std::vector<double> points);

  const std::vector<double>& points() const { return points_; }
  double operator[](std::size_t n) const { return points_[n]; }
  std::size_t intervals() const { return points_.size() - 1; }
  std::size_t size() const { return points_.size(); }
  bool is_uniform() const { return uniform_; }
  /// Constant step; only meaningful when is_uniform().
  double h() const { return h_; }
  double a() const { return points_.front(); }
  double T() const { return points_.back() - points_.front(); }

  /// Throws InvalidParameter unless the endpoints match [a, a + T] within
  /// 1e-12 (relative to max(1, |a|, T)).
  void check_matches(const DerivativeProblem& problem) const;

 private:
  explicit TimeGrid(std::vector<double> points);

  std::vector<double> points_;
  bool uniform_ = false;
  double h_ = 0.0;
};

/// The auxiliary ODE family after the Gauss-Laguerre substitution:
///   d/dt phi(w, t) = -e^w phi(w, t) + c e^{w q_D} y^(ceil(alpha))(t),
/// solved at w in W_- = {-x_k / q_D} and W_+ = {x_k / (1 - q_D)}.
/// Rates e^w are never formed; w itself is stored.
struct DiffusiveSystem {
  double alpha;
  double q_d;
  /// (-1)^floor(alpha) sin(alpha pi) / pi
  double c;
  std::vector<double> nodes;
  std::vector<double> log_weights;
  std::vector<double> w_minus;
  std::vector<double> w_plus;

  std::size_t size() const { return nodes.size(); }
  /// ln(a_k e^{x_k}), the log of the combined weight used in assembly.
  double log_assembly_weight(std::size_t k) const { return log_weights[k] + nodes[k]; }
  /// W_- followed by W_+, the layout of SolverState::phi.
  std::vector<double> all_exponents() const;
};

DiffusiveSystem build_system(const DerivativeProblem& problem, const QuadratureRule& rule);

/// e^w ((1/q_D) phi(-w/q_D) + (1/(1-q_D)) phi(w/(1-q_D))). Only safe for
/// moderate w; the evaluation scheme folds e^w into the weights instead.
double phi_hat(const DiffusiveSystem& system, double phi_at_minus, double phi_at_plus, double w);

/// Lipschitz constants e^w of the 2K auxiliary equations, in log form.
struct StiffnessReport {
  /// W_- block then W_+ block.
  std::vector<double> exponents;
  std::vector<double> log10_lipschitz;
  /// e^w > 1/ulp(1): the explicit step limit is below double resolution.
  std::vector<bool> stiff;
  /// ln L_{K,+} = x_K / (1 - q_D)
  double max_log_lipschitz;
  double max_log10_lipschitz;
  std::size_t stiff_count;
};

StiffnessReport stiffness_report(const DiffusiveSystem& system);

}  // namespace caputo
