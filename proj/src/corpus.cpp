#include "caputo/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "caputo/error.hpp"

namespace caputo {

namespace {

bool is_integer(double p) { return p == std::floor(p); }

// p (p - 1) ... (p - m + 1)
double falling_factorial(double p, int m) {
  double out = 1.0;
  for (int j = 0; j < m; ++j) out *= p - j;
  return out;
}

std::string power_name(double p) {
  std::ostringstream os;
  os << "pow" << p;
  return os.str();
}

}  // namespace

TestFunction::TestFunction(Kind kind, std::string name, double power)
    : kind_(kind), name_(std::move(name)), power_(power) {}

TestFunction TestFunction::constant() { return TestFunction(Kind::kConstant, "const", 0.0); }

TestFunction TestFunction::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidParameter("power must be positive");
  return TestFunction(Kind::kPower, power_name(p), p);
}

TestFunction TestFunction::exponential() { return TestFunction(Kind::kExp, "exp", 0.0); }

TestFunction TestFunction::sine() { return TestFunction(Kind::kSin, "sin", 0.0); }

double TestFunction::derivative(int m, double x) const {
  switch (kind_) {
    case Kind::kConstant:
      return m == 0 ? 1.0 : 0.0;
    case Kind::kPower: {
      if (is_integer(power_) && m > power_) return 0.0;
      return falling_factorial(power_, m) * std::pow(std::max(x, 0.0), power_ - m);
    }
    case Kind::kExp:
      return std::exp(x);
    case Kind::kSin:
      return std::sin(x + m * std::numbers::pi / 2.0);
  }
  return 0.0;
}

std::optional<double> TestFunction::exact_caputo(double alpha, double x) const {
  const int m = integer_order(alpha);
  switch (kind_) {
    case Kind::kConstant:
      return 0.0;
    case Kind::kPower:
      if (is_integer(power_) && power_ < m) return 0.0;
      if (power_ <= m - 1) return std::nullopt;
      if (x == 0.0) return 0.0;
      return std::exp(std::lgamma(power_ + 1.0) - std::lgamma(power_ + 1.0 - alpha)) *
             std::pow(x, power_ - alpha);
    case Kind::kExp:
    case Kind::kSin:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> TestFunction::sup_norm(int m, double length) const {
  switch (kind_) {
    case Kind::kConstant:
      return m == 0 ? 1.0 : 0.0;
    case Kind::kPower: {
      if (is_integer(power_) && m > power_) return 0.0;
      const double coefficient = std::abs(falling_factorial(power_, m));
      const double exponent = power_ - m;
      if (exponent > 0.0) return coefficient * std::pow(length, exponent);
      if (exponent == 0.0) return coefficient;
      return coefficient == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    case Kind::kExp:
      return std::exp(length);
    case Kind::kSin:
      return std::nullopt;
  }
  return std::nullopt;
}

DerivativeProblem TestFunction::problem(double alpha, double a, double T) const {
  const int m = integer_order(alpha);
  const TestFunction self = *this;
  return DerivativeProblem(
      alpha, a, T, [self, m, a](double t) { return self.derivative(m, t - a); },
      [self, m, a](double t) { return self.derivative(m + 1, t - a); });
}

const std::vector<TestFunction>& corpus() {
  static const std::vector<TestFunction> functions = {
      TestFunction::constant(), TestFunction::power(1.0),   TestFunction::power(2.0),
      TestFunction::power(3.0), TestFunction::power(2.5),   TestFunction::exponential(),
      TestFunction::sine()};
  return functions;
}

const TestFunction& corpus_function(const std::string& name) {
  for (const TestFunction& f : corpus()) {
    if (f.name() == name) return f;
  }
  std::string known;
  for (const TestFunction& f : corpus()) known += (known.empty() ? "" : ", ") + f.name();
  throw InvalidParameter("unknown test function '" + name + "' (known: " + known + ")");
}

}  // namespace caputo
