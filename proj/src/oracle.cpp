#include "caputo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "caputo/adaptive.hpp"
#include "caputo/error.hpp"

namespace caputo {

namespace {

// Beyond 40 e-foldings the kernel exp(-(t - tau) e^w) is below 5e-18.
constexpr double kBoundaryLayerWidth = 40.0;
constexpr double kRelativeFloor = 1e-14;

double checked_time(const DerivativeProblem& problem, double t) {
  const double slack = 1e-12 * std::max({1.0, std::abs(problem.a()), problem.T()});
  if (!std::isfinite(t) || t < problem.a() - slack || t > problem.end() + slack) {
    std::ostringstream os;
    os << "t = " << t << " lies outside [" << problem.a() << ", " << problem.end() << "]";
    throw InvalidParameter(os.str());
  }
  return std::clamp(t, problem.a(), problem.end());
}

void check_tolerance(double tol) {
  if (!(tol >= kMinOracleTolerance && tol <= kMaxOracleTolerance)) {
    std::ostringstream os;
    os << "oracle tolerance must be in [" << kMinOracleTolerance << ", " << kMaxOracleTolerance
       << "], got " << tol;
    throw InvalidParameter(os.str());
  }
}

AdaptiveOptions options(double abs_tol, std::size_t pieces) {
  AdaptiveOptions o;
  o.abs_tol = abs_tol;
  o.rel_tol = kRelativeFloor;
  o.initial_pieces = pieces;
  return o;
}

// 2 max |y^(ceil(alpha))| over interior samples of [a, t]; used only to
// place the truncation point of the w integral.
double forcing_bound(const DerivativeProblem& problem, double t) {
  constexpr int kSamples = 1001;
  const double x = t - problem.a();
  double m = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double v = std::abs(problem.d_upper()(problem.a() + x * (i + 0.5) / kSamples));
    if (std::isfinite(v)) m = std::max(m, v);
  }
  return 2.0 * m;
}

}  // namespace

namespace detail {

double phi(const DerivativeProblem& problem, double w, double t, double tol) {
  const double a = problem.a();
  const double x = t - a;
  if (x <= 0.0) return 0.0;
  const double q = q_d(problem.alpha());
  const double c = diffusive_coefficient(problem.alpha());
  const auto& g = problem.d_upper();

  if (w <= 0.0) {
    const double prefactor = c * std::exp(w * q);
    if (prefactor == 0.0) return 0.0;
    const double rate = std::exp(w);
    const double lo = std::max(a, t - kBoundaryLayerWidth / rate);
    auto integrand = [&](double tau) { return g(tau) * std::exp(-(t - tau) * rate); };
    return prefactor * integrate_adaptive(integrand, lo, t, options(tol / std::abs(prefactor), 4)).value;
  }

  // s = (t - tau) e^w
  const double prefactor = c * std::exp(w * (q - 1.0));
  if (prefactor == 0.0) return 0.0;
  const double stretch = std::exp(-w);
  const double upper = std::min(kBoundaryLayerWidth, x * std::exp(w));
  auto integrand = [&](double s) { return g(std::max(a, t - s * stretch)) * std::exp(-s); };
  return prefactor * integrate_adaptive(integrand, 0.0, upper, options(tol / std::abs(prefactor), 4)).value;
}

double scaled_phi_hat(const DerivativeProblem& problem, double w, double t, double tol) {
  const double q = q_d(problem.alpha());
  const double inner_tol = tol / (1.0 / q + 1.0 / (1.0 - q));
  return phi(problem, -w / q, t, inner_tol) / q + phi(problem, w / (1.0 - q), t, inner_tol) / (1.0 - q);
}

}  // namespace detail

double exact_phi(const DerivativeProblem& problem, double w, double t, double tol) {
  check_tolerance(tol);
  if (!std::isfinite(w)) throw InvalidParameter("w must be finite");
  return detail::phi(problem, w, checked_time(problem, t), tol);
}

double exact_phi_hat(const DerivativeProblem& problem, double w, double t, double tol) {
  check_tolerance(tol);
  if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidParameter("phi_hat needs finite w >= 0");
  t = checked_time(problem, t);
  return std::exp(w) * detail::scaled_phi_hat(problem, w, t, tol * std::exp(-w));
}

double reference_quadrature(const DerivativeProblem& problem, double t, double tol) {
  check_tolerance(tol);
  t = checked_time(problem, t);
  const double x = t - problem.a();
  if (x <= 0.0) return 0.0;
  const double bound = forcing_bound(problem, t);
  if (bound == 0.0) return 0.0;

  const double q = q_d(problem.alpha());
  const double c = std::abs(diffusive_coefficient(problem.alpha()));
  // |phi_D(w)| <= c M e^{w (q-1)} for w > 0 and <= c M x e^{w q} for w < 0,
  // so the tail of the w integral beyond W is at most
  // c M e^{-W} (1/(1-q) + x/q).
  const double cutoff = std::max(1.0, std::log(c * bound * (1.0 / (1.0 - q) + x / q) / tol));
  const double inner_tol = tol / (10.0 * cutoff);
  auto integrand = [&](double w) { return detail::scaled_phi_hat(problem, w, t, inner_tol); };
  return integrate_adaptive(integrand, 0.0, cutoff, options(tol, 8)).value;
}

double brute_force_caputo(const DerivativeProblem& problem, double t, double tol) {
  check_tolerance(tol);
  t = checked_time(problem, t);
  const double a = problem.a();
  const double x = t - a;
  if (x <= 0.0) return 0.0;
  const double beta = problem.integer_order() - problem.alpha();
  const double half = 0.5 * x;
  const auto& g = problem.d_upper();

  // [t - x/2, t]: sigma = (t - tau)^beta absorbs the kernel singularity.
  const double near_scale = std::tgamma(beta + 1.0);
  auto near = [&](double sigma) { return g(std::max(a, t - std::pow(sigma, 1.0 / beta))); };
  const double near_part =
      integrate_adaptive(near, 0.0, std::pow(half, beta), options(0.5 * tol * near_scale, 4)).value / near_scale;

  // [a, a + x/2]: tau = a + (x/2) v^4 absorbs an integrable singularity of
  // y^(m) at the start point.
  constexpr double kPower = 4.0;
  const double far_scale = std::tgamma(beta);
  auto far = [&](double v) {
    const double tau = a + half * std::pow(v, kPower);
    if (tau == a) return 0.0;
    return std::pow(t - tau, beta - 1.0) * g(tau) * half * kPower * std::pow(v, kPower - 1.0);
  };
  const double far_part = integrate_adaptive(far, 0.0, 1.0, options(0.5 * tol * far_scale, 4)).value / far_scale;
  return near_part + far_part;
}

}  // namespace caputo
