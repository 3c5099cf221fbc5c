#pragma once

#include "qmont/qcontext.hpp"
#include "qmont/series.hpp"

namespace qmont::qcore {

/// The q-derivative on (a, b]:
///
///   D_q^a f(x) = (f(x) - f(a + q(x - a))) / ((1 - q)(x - a))
///
/// Throws DomainError if x <= a or x > b.
double q_derivative(const RealFn& f, const QContext& ctx, double x);

/// The q-derivative at the left endpoint, lim_{x->a} D_q^a f(x),
/// approximated along the lattice x_j = a + (b - a) q^j, j = 1, 2, ...
/// The iteration stops once `consecutive_small` successive iterates differ
/// by less than tol, and the last iterate is returned.
///
/// Throws ConvergenceError if the Cauchy criterion is not met within
/// max_terms iterations (or the lattice collapses onto a first).
double q_derivative_at_a(const RealFn& f, const QContext& ctx,
                         const SeriesControl& control = {});

/// The Jackson q-integral from a to x, a <= x <= b:
///
///   int_a^x f(t) d_q^a t = (1 - q)(x - a) sum_{k>=0} q^k f(a + q^k (x - a))
///
/// summed under the SeriesControl stopping rule. x == a yields value 0 with
/// zero terms. Term-cap exhaustion is reported as converged == false, not
/// as an error.
SeriesResult jackson_integral(const RealFn& f, const QContext& ctx, double x,
                              const SeriesControl& control = {});

/// The q-integral over a subinterval, a < c < x <= b:
///
///   int_c^x f d_q^a t = int_a^x f d_q^a t - int_a^c f d_q^a t
///
/// Note the result depends on values of f at lattice points below c.
/// terms_used is the larger of the two series; converged is their
/// conjunction; tail_estimate is the sum of both tails.
SeriesResult jackson_integral_sub(const RealFn& f, const QContext& ctx,
                                  double c, double x,
                                  const SeriesControl& control = {});

/// Central difference (f(x+h) - f(x-h)) / (2h). Oracle for the q -> 1
/// derivative limit.
double classical_derivative_fd(const RealFn& f, double x, double h);

/// Composite Simpson rule with n panels (n even, a < x). Oracle for the
/// q -> 1 integral limit.
double riemann_integral_oracle(const RealFn& f, double a, double x, int n);

}  // namespace qmont::qcore
