#include "qmont/qcore.hpp"

#include <cmath>
#include <sstream>

#include "qmont/detail/series_sum.hpp"
#include "qmont/errors.hpp"

namespace qmont {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

QContext::QContext(double q, double a, double b) : q_(q), a_(a), b_(b) {
  if (!(std::isfinite(q) && q > 0.0 && q < 1.0))
    throw DomainError("q must satisfy 0 < q < 1, got q = " + fmt(q));
  if (!(std::isfinite(a) && std::isfinite(b) && a < b))
    throw DomainError("interval endpoints must be finite with a < b, got [" +
                      fmt(a) + ", " + fmt(b) + "]");
}

double RealFn::operator()(double x) const {
  const double v = fn_(x);
  if (!std::isfinite(v))
    throw EvalError("function '" + label_ + "' evaluated to a non-finite value at t = " + fmt(x));
  return v;
}

void SeriesControl::validate() const {
  if (!(std::isfinite(tol) && tol > 0.0))
    throw DomainError("series tolerance must be positive, got " + fmt(tol));
  if (max_terms < 1)
    throw DomainError("max_terms must be at least 1, got " + std::to_string(max_terms));
  if (consecutive_small < 1)
    throw DomainError("consecutive_small must be at least 1, got " + std::to_string(consecutive_small));
}

namespace qcore {

double q_derivative(const RealFn& f, const QContext& ctx, double x) {
  if (!(x > ctx.a() && x <= ctx.b()))
    throw DomainError("q-derivative needs a < x <= b, got x = " + fmt(x) +
                      " on [" + fmt(ctx.a()) + ", " + fmt(ctx.b()) + "]");
  const double shifted = ctx.a() + ctx.q() * (x - ctx.a());
  return (f(x) - f(shifted)) / ((1.0 - ctx.q()) * (x - ctx.a()));
}

double q_derivative_at_a(const RealFn& f, const QContext& ctx,
                         const SeriesControl& control) {
  control.validate();
  const double a = ctx.a();
  const double span = ctx.b() - ctx.a();
  const double q = ctx.q();

  double p = q;  // q^j
  double prev = q_derivative(f, ctx, a + span * p);
  int small_run = 0;
  for (std::int64_t j = 2; j <= control.max_terms; ++j) {
    p *= q;
    const double x = a + span * p;
    if (!(x > a))
      throw ConvergenceError("q-derivative limit at a for '" + f.label() +
                             "': lattice collapsed onto a before the iterates stabilized");
    const double cur = q_derivative(f, ctx, x);
    if (std::fabs(cur - prev) < control.tol) {
      if (++small_run >= control.consecutive_small) return cur;
    } else {
      small_run = 0;
    }
    prev = cur;
  }
  throw ConvergenceError("q-derivative limit at a for '" + f.label() +
                         "' did not stabilize within " +
                         std::to_string(control.max_terms) + " iterations");
}

SeriesResult jackson_integral(const RealFn& f, const QContext& ctx, double x,
                              const SeriesControl& control) {
  control.validate();
  if (!(x >= ctx.a() && x <= ctx.b()))
    throw DomainError("Jackson integral needs a <= x <= b, got x = " + fmt(x) +
                      " on [" + fmt(ctx.a()) + ", " + fmt(ctx.b()) + "]");
  if (x == ctx.a()) {
    // the (x - a) prefactor kills every term
    return SeriesResult{0.0, 0, 0.0, true};
  }
  const double a = ctx.a();
  const double q = ctx.q();
  const double span = x - a;
  const double pref = (1.0 - q) * span;
  double p = 1.0;  // q^k
  return detail::sum_q_series(q, control, [&](std::int64_t) {
    const double term = pref * p * f(a + p * span);
    p *= q;
    return term;
  });
}

SeriesResult jackson_integral_sub(const RealFn& f, const QContext& ctx,
                                  double c, double x,
                                  const SeriesControl& control) {
  if (!(c > ctx.a() && c < x))
    throw DomainError("subinterval q-integral needs a < c < x, got c = " +
                      fmt(c) + ", x = " + fmt(x));
  const SeriesResult upper = jackson_integral(f, ctx, x, control);
  const SeriesResult lower = jackson_integral(f, ctx, c, control);
  SeriesResult out;
  out.value = upper.value - lower.value;
  out.terms_used = std::max(upper.terms_used, lower.terms_used);
  out.tail_estimate = upper.tail_estimate + lower.tail_estimate;
  out.converged = upper.converged && lower.converged;
  return out;
}

double classical_derivative_fd(const RealFn& f, double x, double h) {
  if (!(std::isfinite(h) && h > 0.0))
    throw DomainError("finite-difference step must be positive, got h = " + fmt(h));
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double riemann_integral_oracle(const RealFn& f, double a, double x, int n) {
  if (!(a < x))
    throw DomainError("Simpson oracle needs a < x, got [" + fmt(a) + ", " + fmt(x) + "]");
  if (n < 2 || n % 2 != 0)
    throw DomainError("Simpson oracle needs an even panel count >= 2, got " + std::to_string(n));
  const double h = (x - a) / n;
  double sum = f(a) + f(x);
  for (int i = 1; i < n; i += 2) sum += 4.0 * f(a + i * h);
  for (int i = 2; i < n; i += 2) sum += 2.0 * f(a + i * h);
  return sum * h / 3.0;
}

}  // namespace qcore
}  // namespace qmont
