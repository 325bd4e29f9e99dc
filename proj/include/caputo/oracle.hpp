#pragma once

#include "caputo/diffusive.hpp"

namespace caputo {

/// Tolerance range accepted by the public oracle entry points.
inline constexpr double kMinOracleTolerance = 1e-14;
inline constexpr double kMaxOracleTolerance = 1e-6;

/// phi_D(w, t) = c e^{w q_D} int_a^t y^(ceil(alpha))(tau) exp(-(t - tau) e^w) dtau
/// by adaptive quadrature, absolute error estimate <= tol. Only the last
/// 40 e^{-w} of the history contributes above rounding; for w > 0 the
/// integral is taken in the stretched variable s = (t - tau) e^w over
/// [0, min(40, (t - a) e^w)], which is the same window without the
/// cancellation t - 40 e^{-w} suffers at large w.
double exact_phi(const DerivativeProblem& problem, double w, double t, double tol);

/// e^w ((1/q_D) phi_D(-w/q_D, t) + (1/(1-q_D)) phi_D(w/(1-q_D), t)), w >= 0.
double exact_phi_hat(const DerivativeProblem& problem, double w, double t, double tol);

/// D_a^alpha y(t) as the integral over w in [0, inf) of e^{-w} phi_hat(w, t),
/// truncated where the exponential decay of phi_D puts the tail below tol.
/// Error estimate <= 2 tol.
double reference_quadrature(const DerivativeProblem& problem, double t, double tol);

/// D_a^alpha y(t) from the Caputo definition
///   1/Gamma(m - alpha) int_a^t (t - tau)^{m - alpha - 1} y^(m)(tau) dtau,
/// m = ceil(alpha). The kernel singularity at tau = t is removed by
/// sigma = (t - tau)^{m - alpha}; the half next to a is integrated in
/// v = ((tau - a) / ((t - a) / 2))^{1/4} so that integrable singularities
/// of y^(m) at a are handled too.
double brute_force_caputo(const DerivativeProblem& problem, double t, double tol);

namespace detail {

/// exact_phi without the tolerance range check; tol may be any positive
/// value.
double phi(const DerivativeProblem& problem, double w, double t, double tol);

/// e^{-w} phi_hat(w, t), i.e. the bracket of phi_hat without the e^w factor
/// (which may overflow); absolute error <= tol.
double scaled_phi_hat(const DerivativeProblem& problem, double w, double t, double tol);

}  // namespace detail

}  // namespace caputo
