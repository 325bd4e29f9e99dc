#pragma once

#include <optional>
#include <string>
#include <vector>

#include "caputo/diffusive.hpp"

namespace caputo {

/// Test functions y(t) = f(t - a) with every derivative in closed form and,
/// where one exists, the closed-form Caputo derivative.
class TestFunction {
 public:
  enum class Kind { kConstant, kPower, kExp, kSin };

  static TestFunction constant();
  /// (t - a)^p, p > 0.
  static TestFunction power(double p);
  static TestFunction exponential();
  static TestFunction sine();

  const std::string& name() const { return name_; }
  Kind kind() const { return kind_; }

  /// y^(m)(a + x) for x >= 0.
  double derivative(int m, double x) const;
  /// D_a^alpha y(a + x); power rule Gamma(p+1)/Gamma(p+1-alpha) x^{p-alpha}
  /// for powers, nothing for exp and sin.
  std::optional<double> exact_caputo(double alpha, double x) const;
  /// sup over [a, a + length] of |y^(m)| when it is trivial to write down.
  std::optional<double> sup_norm(int m, double length) const;

  /// Problem with y^(ceil(alpha)) and y^(ceil(alpha)+1) bound in.
  DerivativeProblem problem(double alpha, double a, double T) const;

 private:
  TestFunction(Kind kind, std::string name, double power);

  Kind kind_;
  std::string name_;
  double power_;
};

/// const, pow1, pow2, pow3, pow2.5, exp, sin.
const std::vector<TestFunction>& corpus();

/// Throws InvalidParameter for an unknown name.
const TestFunction& corpus_function(const std::string& name);

}  // namespace caputo
