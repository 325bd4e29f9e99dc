#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace caputo {

/// ln(1 + e^z) without overflow for large z or loss of precision for
/// very negative z.
inline double softplus(double z) {
  if (z <= 0.0) return std::log1p(std::exp(z));
  return z + std::log1p(std::exp(-z));
}

/// ln(e^x + e^y); either argument may be -inf.
inline double log_add_exp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  if (x < y) std::swap(x, y);
  return x + std::log1p(std::exp(y - x));
}

/// A positive quantity held as its natural logarithm, for values that may
/// leave the double range.
struct LogValue {
  double log = -std::numeric_limits<double>::infinity();

  bool is_zero() const { return log == -std::numeric_limits<double>::infinity(); }
  bool representable() const { return log < std::log(std::numeric_limits<double>::max()); }
  double value() const { return std::exp(log); }
  double log10() const { return log / std::log(10.0); }

  /// Scientific form m * 10^e with 1 <= m < 10. Zero maps to (0, 0).
  struct Scientific {
    double mantissa;
    long exponent;
  };
  Scientific scientific() const {
    if (is_zero()) return {0.0, 0};
    const double l10 = log10();
    const double e = std::floor(l10);
    return {std::pow(10.0, l10 - e), static_cast<long>(e)};
  }
};

}  // namespace caputo
