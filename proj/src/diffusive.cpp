#include "caputo/diffusive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "caputo/error.hpp"

namespace caputo {

void validate_order(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    std::ostringstream os;
    os << "derivative order must be positive, got " << alpha;
    throw InvalidOrder(os.str());
  }
  if (std::abs(alpha - std::round(alpha)) <= kIntegerOrderTolerance) {
    std::ostringstream os;
    os << "derivative order must not be an integer, got " << alpha;
    throw InvalidOrder(os.str());
  }
}

int integer_order(double alpha) {
  validate_order(alpha);
  return static_cast<int>(std::ceil(alpha));
}

double q_d(double alpha) { return alpha - static_cast<double>(integer_order(alpha)) + 1.0; }

double diffusive_coefficient(double alpha) {
  validate_order(alpha);
  const double floor_alpha = std::floor(alpha);
  const double parity = std::fmod(floor_alpha, 2.0) == 0.0 ? 1.0 : -1.0;
  // sin(alpha pi) through the fractional part keeps the argument reduction
  // exact: sin(alpha pi) = (-1)^floor(alpha) sin((alpha - floor(alpha)) pi).
  const double sin_alpha_pi = parity * std::sin((alpha - floor_alpha) * std::numbers::pi);
  return parity * sin_alpha_pi / std::numbers::pi;
}

DerivativeProblem::DerivativeProblem(double alpha, double a, double T, ScalarFunction d_upper,
                                     ScalarFunction d_upper_plus)
    : alpha_(alpha), a_(a), T_(T), d_upper_(std::move(d_upper)), d_upper_plus_(std::move(d_upper_plus)) {
  validate_order(alpha_);
  if (!std::isfinite(a_)) throw InvalidParameter("interval start must be finite");
  if (!std::isfinite(T_) || !(T_ > 0.0)) throw InvalidParameter("interval length T must be positive");
  if (!d_upper_) throw InvalidParameter("problem needs y^(ceil(alpha))");
}

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw InvalidParameter("time grid needs at least two points");
  for (std::size_t n = 0; n < points_.size(); ++n) {
    if (!std::isfinite(points_[n])) throw InvalidParameter("time grid point is not finite");
    if (n > 0 && !(points_[n] > points_[n - 1])) {
      throw InvalidParameter("time grid must be strictly increasing (index " + std::to_string(n) + ")");
    }
  }
  const double T = points_.back() - points_.front();
  const double h = T / static_cast<double>(points_.size() - 1);
  double worst = 0.0;
  for (std::size_t n = 1; n < points_.size(); ++n) {
    worst = std::max(worst, std::abs(points_[n] - points_[n - 1] - h));
  }
  uniform_ = worst <= 1e-12 * T;
  h_ = uniform_ ? h : 0.0;
}

TimeGrid TimeGrid::uniform(double a, double T, std::size_t N) {
  if (N == 0) throw InvalidParameter("uniform grid needs N >= 1");
  if (!(T > 0.0)) throw InvalidParameter("grid length must be positive");
  std::vector<double> p(N + 1);
  const double Nd = static_cast<double>(N);
  for (std::size_t n = 0; n <= N; ++n) p[n] = a + T * (static_cast<double>(n) / Nd);
  p.back() = a + T;
  return TimeGrid(std::move(p));
}

TimeGrid TimeGrid::graded(double a, double T, std::size_t N, double exponent) {
  if (N == 0) throw InvalidParameter("graded grid needs N >= 1");
  if (!(T > 0.0)) throw InvalidParameter("grid length must be positive");
  if (!std::isfinite(exponent) || !(exponent > 0.0)) {
    throw InvalidParameter("grading exponent must be positive");
  }
  std::vector<double> p(N + 1);
  const double Nd = static_cast<double>(N);
  for (std::size_t n = 0; n <= N; ++n) p[n] = a + T * std::pow(static_cast<double>(n) / Nd, exponent);
  p.back() = a + T;
  return TimeGrid(std::move(p));
}

TimeGrid TimeGrid::from_points(std::vector<double> points) { return TimeGrid(std::move(points)); }

void TimeGrid::check_matches(const DerivativeProblem& problem) const {
  const double scale = std::max({1.0, std::abs(problem.a()), problem.T()});
  if (std::abs(points_.front() - problem.a()) > 1e-12 * scale ||
      std::abs(points_.back() - problem.end()) > 1e-12 * scale) {
    throw InvalidParameter("time grid endpoints do not match the problem interval");
  }
}

std::vector<double> DiffusiveSystem::all_exponents() const {
  std::vector<double> out(w_minus);
  out.insert(out.end(), w_plus.begin(), w_plus.end());
  return out;
}

DiffusiveSystem build_system(const DerivativeProblem& problem, const QuadratureRule& rule) {
  const double alpha = problem.alpha();
  const double q = q_d(alpha);

  DiffusiveSystem s;
  s.alpha = alpha;
  s.q_d = q;
  s.c = diffusive_coefficient(alpha);
  s.nodes = rule.nodes();
  s.log_weights = rule.log_weights();
  s.w_minus.resize(rule.size());
  s.w_plus.resize(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    s.w_minus[k] = -rule.node(k) / q;
    s.w_plus[k] = rule.node(k) / (1.0 - q);
  }
  return s;
}

double phi_hat(const DiffusiveSystem& system, double phi_at_minus, double phi_at_plus, double w) {
  if (!(w >= 0.0)) throw InvalidParameter("phi_hat needs w >= 0");
  const double q = system.q_d;
  return std::exp(w) * (phi_at_minus / q + phi_at_plus / (1.0 - q));
}

StiffnessReport stiffness_report(const DiffusiveSystem& system) {
  const double ln10 = std::log(10.0);
  // e^w > 1 / ulp(1.0) = 2^52
  const double stiff_threshold = -std::log(std::numeric_limits<double>::epsilon());

  StiffnessReport r;
  r.exponents = system.all_exponents();
  r.log10_lipschitz.reserve(r.exponents.size());
  r.stiff.reserve(r.exponents.size());
  r.stiff_count = 0;
  for (double w : r.exponents) {
    r.log10_lipschitz.push_back(w / ln10);
    r.stiff.push_back(w > stiff_threshold);
    if (w > stiff_threshold) ++r.stiff_count;
  }
  r.max_log_lipschitz = system.w_plus.back();
  r.max_log10_lipschitz = r.max_log_lipschitz / ln10;
  return r;
}

}  // namespace caputo
