#include "qmont/montgomery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qmont/detail/series_sum.hpp"
#include "qmont/errors.hpp"
#include "qmont/qcore.hpp"

namespace qmont::montgomery {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_interior(const QContext& ctx, double x, const char* what) {
  if (!(x > ctx.a() && x < ctx.b()))
    throw DomainError(std::string(what) + " needs a < x < b, got x = " + fmt(x) +
                      " on [" + fmt(ctx.a()) + ", " + fmt(ctx.b()) + "]");
}

struct LevelSearch {
  std::int64_t m;
  double q_pow_m1;  // q^{m+1} as the running product the search ended on
};

// Finds the unique m >= 0 with q^{m+1} <= ratio < q^m by repeated
// multiplication. The acceptance threshold carries a relative tie fuzz of
// 1e-12 plus an absolute floor of a few ulps of max(|a|,|b|)/(b-a): the
// floor absorbs the rounding of a reconstructed node a + q^{m+1}(b-a),
// which on shifted intervals can exceed any purely relative tolerance and
// would otherwise break projection idempotence. The floor's influence is
// capped at half the ratio so that a ratio far below one ulp of the
// interval still walks the full lattice (and trips the iteration cap)
// instead of silently landing on a shallow level.
LevelSearch level_search(const QContext& ctx, double x, std::int64_t cap) {
  require_interior(ctx, x, "node projection");
  const double q = ctx.q();
  const double ratio = (x - ctx.a()) / (ctx.b() - ctx.a());
  const double scale =
      std::max(std::fabs(ctx.a()), std::fabs(ctx.b())) / (ctx.b() - ctx.a());
  const double accept =
      std::min(ratio * (1.0 + 1e-12) +
                   8.0 * std::numeric_limits<double>::epsilon() * scale,
               1.5 * ratio);
  double p = q;
  std::int64_t m = 0;
  while (p > accept) {
    p *= q;
    if (++m > cap)
      throw CapError("node level search for x = " + fmt(x) +
                     " exceeded " + std::to_string(cap) +
                     " iterations (x pathologically close to a)");
  }
  return {m, p};
}

}  // namespace

double kernel_eval(const QContext& ctx, double x, double t) {
  require_interior(ctx, x, "Montgomery kernel");
  if (!(t >= 0.0 && t <= 1.0))
    throw DomainError("Montgomery kernel needs t in [0, 1], got t = " + fmt(t));
  const double ratio = (x - ctx.a()) / (ctx.b() - ctx.a());
  // breakpoint belongs to the first branch
  return t <= ratio ? ctx.q() * t : ctx.q() * t - 1.0;
}

NodeIndex m_index(const QContext& ctx, double x, std::int64_t max_iter) {
  return NodeIndex{level_search(ctx, x, max_iter).m};
}

double q_node(const QContext& ctx, double x) {
  const LevelSearch ls = level_search(ctx, x, kDefaultLevelCap);
  return ctx.a() + ls.q_pow_m1 * (ctx.b() - ctx.a());
}

SeriesResult montgomery_rhs(const RealFn& f, const QContext& ctx, double x,
                            const SeriesControl& control) {
  control.validate();
  const LevelSearch ls = level_search(ctx, x, control.max_terms);
  const double q = ctx.q();
  const double a = ctx.a();
  const double b = ctx.b();
  const double pref = (b - a) * (1.0 - q);
  double p = 1.0;  // q^k
  return detail::sum_q_series(q, control, [&, m = ls.m](std::int64_t k) {
    const double node = a + p * (b - a);
    if (!(node > a))
      throw EvalError("Montgomery rhs series for '" + f.label() +
                      "': lattice collapsed onto a at term " + std::to_string(k));
    // K(q^k) by the integer case split, never by floating comparison
    const double kernel = k <= m ? p * q - 1.0 : p * q;
    const double term = pref * p * kernel * qcore::q_derivative(f, ctx, node);
    p *= q;
    return term;
  });
}

double original_lhs(const RealFn& f, const QContext& ctx, double x,
                    const SeriesControl& control) {
  require_interior(ctx, x, "Montgomery identity");
  const SeriesResult avg = qcore::jackson_integral(f, ctx, ctx.b(), control);
  return f(x) - avg.value / (ctx.b() - ctx.a());
}

double corrected_lhs(const RealFn& f, const QContext& ctx, double x,
                     const SeriesControl& control) {
  const double node = q_node(ctx, x);
  const SeriesResult avg = qcore::jackson_integral(f, ctx, ctx.b(), control);
  return f(node) - avg.value / (ctx.b() - ctx.a());
}

IdentityReport check_identity(const RealFn& f, const QContext& ctx, double x,
                              const SeriesControl& control) {
  IdentityReport rep;
  rep.x = x;
  rep.node = q_node(ctx, x);
  rep.series = montgomery_rhs(f, ctx, x, control);
  rep.avg_series = qcore::jackson_integral(f, ctx, ctx.b(), control);
  rep.avg_integral = rep.avg_series.value / (ctx.b() - ctx.a());
  rep.rhs = rep.series.value;
  rep.lhs_original = f(x) - rep.avg_integral;
  rep.lhs_corrected = f(rep.node) - rep.avg_integral;
  rep.residual_original = rep.lhs_original - rep.rhs;
  rep.residual_corrected = rep.lhs_corrected - rep.rhs;
  return rep;
}

std::vector<ScanRow> residual_scan(const RealFn& f, const QContext& ctx,
                                   const std::vector<double>& xs,
                                   const SeriesControl& control) {
  std::vector<ScanRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    ScanRow row;
    row.x = x;
    try {
      row.report = check_identity(f, ctx, x, control);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ConvexityReport convexity_step_check(const RealFn& f, const QContext& ctx,
                                     double r,
                                     const std::vector<double>& t_grid,
                                     const SeriesControl& control) {
  control.validate();
  if (!(std::isfinite(r) && r >= 1.0))
    throw DomainError("convexity exponent needs r >= 1, got r = " + fmt(r));
  for (double t : t_grid)
    if (!(t >= 0.0 && t <= 1.0))
      throw DomainError("convexity grid point outside [0, 1]: t = " + fmt(t));

  ConvexityReport rep;
  rep.r = r;
  rep.t_grid = t_grid;
  rep.deriv_at_b = std::fabs(qcore::q_derivative(f, ctx, ctx.b()));
  rep.deriv_at_a = std::fabs(qcore::q_derivative_at_a(f, ctx, control));
  const double end_b = std::pow(rep.deriv_at_b, r);
  const double end_a = std::pow(rep.deriv_at_a, r);

  for (double t : t_grid) {
    const double arg = t * ctx.b() + (1.0 - t) * ctx.a();
    const double deriv = arg > ctx.a() ? qcore::q_derivative(f, ctx, arg)
                                       : rep.deriv_at_a;
    const double lhs = std::pow(std::fabs(deriv), r);
    const double corrected = t * end_b + (1.0 - t) * end_a;
    const double erroneous = t * end_a + (1.0 - t) * end_b;
    if (lhs > corrected + control.tol)
      rep.corrected_violations.push_back({t, lhs, corrected});
    if (lhs > erroneous + control.tol)
      rep.erroneous_violations.push_back({t, lhs, erroneous});
  }
  return rep;
}

}  // namespace qmont::montgomery
