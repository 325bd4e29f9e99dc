#pragma once

#include <cstddef>
#include <functional>

namespace caputo {

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  std::size_t max_intervals = 4000;
  /// Equal pieces the range is split into before refinement starts.
  std::size_t initial_pieces = 1;
};

struct IntegrationResult {
  double value;
  /// Sum of per-interval |Kronrod - Gauss| differences.
  double error;
  std::size_t intervals;
  std::size_t evaluations;
};

/// Globally adaptive bisection with the 7/15-point Gauss-Kronrod pair: the
/// interval with the largest error estimate is split until the summed
/// estimate drops below max(abs_tol, rel_tol |I|) or reaches the rounding
/// floor of the integrand. Throws OracleFailure on a non-finite integrand
/// value or when max_intervals is exhausted first.
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                     const AdaptiveOptions& options);

}  // namespace caputo
