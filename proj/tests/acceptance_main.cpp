// Acceptance harness: exercises the headline claims end to end and prints
// one PASS/FAIL line per check. Exit status is the number of failures.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "qmont/errors.hpp"
#include "qmont/funcexpr.hpp"
#include "qmont/montgomery.hpp"
#include "qmont/qcore.hpp"

using qmont::QContext;
using qmont::RealFn;
using qmont::SeriesResult;
namespace fx = qmont::funcexpr;
namespace mont = qmont::montgomery;
namespace qcore = qmont::qcore;

namespace {

int failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %d %s (%s)\n", ok ? "PASS" : "FAIL", idx, name, detail.c_str());
  if (!ok) ++failures;
}

std::string metric(const char* label, double v) {
  char b[96];
  std::snprintf(b, sizeof b, "%s %.3g", label, v);
  return b;
}

std::int64_t ulp_distance(double x, double y) {
  std::int64_t ix, iy;
  std::memcpy(&ix, &x, sizeof ix);
  std::memcpy(&iy, &y, sizeof iy);
  if (ix < 0) ix = std::numeric_limits<std::int64_t>::min() - ix;
  if (iy < 0) iy = std::numeric_limits<std::int64_t>::min() - iy;
  return ix >= iy ? ix - iy : iy - ix;
}

struct NamedFn {
  const char* name;
  std::function<double(double)> fn;
};

const std::vector<NamedFn> kGridFns = {
    {"t", [](double t) { return t; }},
    {"t^2", [](double t) { return t * t; }},
    {"exp", [](double t) { return std::exp(t); }},
    {"sin", [](double t) { return std::sin(t); }},
};

// the identity evaluated at one point; returns false if anything threw
bool eval_report(const NamedFn& nf, const QContext& ctx, double x,
                 mont::IdentityReport& out) {
  try {
    out = mont::check_identity(RealFn{nf.name, nf.fn}, ctx, x);
    return out.series.converged && out.avg_series.converged;
  } catch (const qmont::Error&) {
    return false;
  }
}

// -------------------------------------------------------------------------

void worked_counterexample() {
  const QContext ctx(0.5, 0.0, 1.0);
  const RealFn id{"t", [](double t) { return t; }};
  const SeriesResult rhs = mont::montgomery_rhs(id, ctx, 0.3);
  const mont::IdentityReport rep = mont::check_identity(id, ctx, 0.3);
  const double rhs_err = std::fabs(rhs.value - (-5.0 / 12.0));
  const double orig_err = std::fabs(rep.residual_original - 0.05);
  const bool ok = rhs_err < 1e-10 && std::fabs(rep.residual_corrected) < 1e-10 &&
                  orig_err < 1e-10;
  report(1, "worked counterexample: f(t)=t, q=0.5, x=0.3", ok,
         metric("rhs err", rhs_err) + ", " +
             metric("corrected residual", std::fabs(rep.residual_corrected)) +
             ", " + metric("original residual err", orig_err));
}

void corrected_identity_grid() {
  double worst = 0.0;
  bool all_converged = true;
  for (const NamedFn& nf : kGridFns) {
    for (int qi = 1; qi <= 9; ++qi) {
      for (const auto& iv : {std::pair{0.0, 1.0}, std::pair{2.0, 4.0}}) {
        const QContext ctx(qi / 10.0, iv.first, iv.second);
        for (int i = 1; i <= 50; ++i) {
          const double x = ctx.a() + (ctx.b() - ctx.a()) * i / 51.0;
          mont::IdentityReport rep;
          if (!eval_report(nf, ctx, x, rep)) {
            all_converged = false;
            continue;
          }
          worst = std::max(worst, std::fabs(rep.residual_corrected));
        }
      }
    }
  }
  report(2, "corrected identity on the full grid", all_converged && worst < 1e-8,
         metric("max |residual|", worst));
}

void failure_law_grid() {
  double worst_law = 0.0;
  for (const NamedFn& nf : kGridFns) {
    for (int qi = 1; qi <= 9; ++qi) {
      for (const auto& iv : {std::pair{0.0, 1.0}, std::pair{2.0, 4.0}}) {
        const QContext ctx(qi / 10.0, iv.first, iv.second);
        for (int i = 1; i <= 50; ++i) {
          const double x = ctx.a() + (ctx.b() - ctx.a()) * i / 51.0;
          mont::IdentityReport rep;
          if (!eval_report(nf, ctx, x, rep)) continue;
          const double expected = nf.fn(x) - nf.fn(rep.node);
          worst_law = std::max(worst_law,
                               std::fabs(rep.residual_original - expected));
        }
      }
    }
  }

  // strict monotone case: off-node residuals bounded away from zero at the
  // inter-node midpoints, exactly zero (to tolerance) on the nodes
  const RealFn id{"t", [](double t) { return t; }};
  double worst_node = 0.0;
  double min_mid_half = std::numeric_limits<double>::infinity();
  bool mids_positive = true;
  for (int qi = 1; qi <= 9; ++qi) {
    for (const auto& iv : {std::pair{0.0, 1.0}, std::pair{2.0, 4.0}}) {
      const QContext ctx(qi / 10.0, iv.first, iv.second);
      const double span = ctx.b() - ctx.a();
      double p = 1.0;
      for (int k = 1; k <= 5; ++k) {
        p *= ctx.q();
        const mont::IdentityReport nrep =
            mont::check_identity(id, ctx, ctx.a() + p * span);
        worst_node = std::max(worst_node, std::fabs(nrep.residual_original));
        const double mid = ctx.a() + p * span * (1.0 + ctx.q()) / (2.0 * ctx.q());
        if (mid >= ctx.b()) continue;
        const mont::IdentityReport mrep = mont::check_identity(id, ctx, mid);
        mids_positive = mids_positive && mrep.residual_original > 0.0;
        if (ctx.q() == 0.5)
          min_mid_half = std::min(min_mid_half, mrep.residual_original);
      }
    }
  }
  const bool ok = worst_law < 1e-8 && worst_node < 1e-10 && mids_positive &&
                  min_mid_half > 1e-4;
  report(3, "failure law: original identity misses by f(x) - f(node)", ok,
         metric("max law err", worst_law) + ", " +
             metric("max node residual", worst_node) + ", " +
             metric("min midpoint residual at q=0.5", min_mid_half));
}

void closed_form_integrals() {
  double worst = 0.0;
  for (double q : {0.3, 0.7}) {
    const QContext ctx(q, 0.0, 1.0);
    for (int n = 1; n <= 5; ++n) {
      const RealFn f{"t^n", [n](double t) { return std::pow(t, n); }};
      const double got = qcore::jackson_integral(f, ctx, 1.0).value;
      const double want = (1.0 - q) / (1.0 - std::pow(q, n + 1));
      worst = std::max(worst, std::fabs(got - want));
    }
  }
  report(4, "closed-form q-integrals of monomials", worst < 1e-10,
         metric("max err", worst));
}

void classical_limits() {
  const RealFn cube{"t^3", [](double t) { return t * t * t; }};
  const double d999 =
      qcore::q_derivative(cube, QContext(0.999, 0.0, 2.0), 1.5);
  const double derr999 = std::fabs(d999 - 6.75);

  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (int j = 3; j <= 10; ++j) {
    const QContext ctx(1.0 - std::ldexp(1.0, -j), 0.0, 2.0);
    const double err = std::fabs(qcore::q_derivative(cube, ctx, 1.5) - 6.75);
    monotone = monotone && err < prev;
    prev = err;
  }

  const RealFn square{"t^2", [](double t) { return t * t; }};
  const SeriesResult integ =
      qcore::jackson_integral(square, QContext(0.999, 0.0, 1.0), 1.0);
  const double ierr = std::fabs(integ.value - 1.0 / 3.0);

  const bool ok = derr999 < 0.01 && monotone && integ.converged && ierr < 0.01;
  report(5, "q -> 1 recovers the classical derivative and integral", ok,
         metric("deriv err at q=0.999", derr999) + ", " +
             metric("integral err", ierr) +
             (monotone ? ", error monotone" : ", error NOT monotone"));
}

void fundamental_theorem() {
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> qdist(0.1, 0.9);
  std::uniform_real_distribution<double> xdist(0.05, 1.0);
  const std::vector<NamedFn> fns = {
      {"t", [](double t) { return t; }},
      {"t^2", [](double t) { return t * t; }},
      {"exp", [](double t) { return std::exp(t); }},
  };
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const QContext ctx(qdist(rng), 0.0, 1.0);
    const double x = xdist(rng);
    for (const NamedFn& nf : fns) {
      const RealFn f{nf.name, nf.fn};
      const RealFn deriv{"D f", [&f, ctx](double t) {
        return qcore::q_derivative(f, ctx, t);
      }};
      const double got = qcore::jackson_integral(deriv, ctx, x).value;
      const double want = nf.fn(x) - nf.fn(0.0);
      worst = std::max(worst, std::fabs(got - want));
    }
  }
  report(6, "q-integral of the q-derivative telescopes to f(x) - f(a)",
         worst < 1e-8, metric("max err over 20 draws", worst));
}

void convexity_correction() {
  const QContext ctx(0.5, 0.0, 1.0);
  const RealFn square{"t^2", [](double t) { return t * t; }};
  std::vector<double> grid;
  for (int j = 0; j < 101; ++j) grid.push_back(j / 100.0);
  const mont::ConvexityReport rep =
      mont::convexity_step_check(square, ctx, 1.0, grid);

  bool found = false;
  double lhs09 = 0.0, bound09 = 0.0;
  for (const mont::ConvexityViolation& v : rep.erroneous_violations) {
    if (std::fabs(v.t - 0.9) < 1e-9) {
      found = true;
      lhs09 = v.lhs;
      bound09 = v.rhs_bound;
    }
  }
  const bool ok = rep.corrected_violations.empty() && found &&
                  std::fabs(lhs09 - 1.35) < 1e-9 && bound09 < 0.15 + 1e-6;
  report(7, "convexity step: swapped endpoints fail, corrected holds", ok,
         metric("violation at t=0.9: lhs", lhs09) + " > " +
             metric("bound", bound09) + ", corrected violations " +
             std::to_string(rep.corrected_violations.size()));
}

void node_projection_properties() {
  std::mt19937 rng(987654321);
  std::uniform_real_distribution<double> qdist(0.05, 0.95);
  std::uniform_real_distribution<double> udist(0.0, 1.0);
  std::uniform_int_distribution<int> kdist(1, 20);
  std::uniform_int_distribution<int> ivdist(0, 1);

  int checked = 0;
  bool ok = true;
  std::string why;
  const auto fail = [&](const std::string& msg) {
    if (ok) why = msg;
    ok = false;
  };

  for (int draw = 0; draw < 1000; ++draw) {
    const double q = qdist(rng);
    const double a = ivdist(rng) ? 2.0 : 0.0;
    const double b = a == 2.0 ? 4.0 : 1.0;
    const QContext ctx(q, a, b);
    const double span = b - a;
    const double kind = udist(rng);

    double x;
    int exact_level = -1;  // >= 1 when x was built as the node a + q^k (b-a)
    bool below_perturbed = false;
    if (kind < 0.4) {
      x = a + span * (0.001 + 0.998 * udist(rng));
    } else {
      int k = kdist(rng);
      double p = q;
      int lvl = 1;
      while (lvl < k && p * q > 1e-9) {  // stay well above rounding depth
        p *= q;
        ++lvl;
      }
      x = a + p * span;
      exact_level = lvl;
      if (kind >= 0.7) {
        const bool below = udist(rng) < 0.5;
        below_perturbed = below;
        x = x * (below ? 1.0 - 1e-13 : 1.0 + 1e-13);
        if (!(x > a && x < b)) continue;
      }
    }

    const std::int64_t m = mont::m_index(ctx, x).m;
    const double node = mont::q_node(ctx, x);
    ++checked;

    // tie-aware bracketing, recomputed by repeated multiplication
    const double ratio = (x - a) / span;
    double qm = 1.0;
    for (std::int64_t j = 0; j < m; ++j) qm *= q;
    const double scale = std::max(std::fabs(a), std::fabs(b)) / span;
    const double accept =
        ratio * (1.0 + 1e-12) + 8.0 * std::numeric_limits<double>::epsilon() * scale;
    if (!(ratio < qm)) fail("upper bracket failed");
    if (!(qm * q <= accept)) fail("lower bracket failed");

    if (exact_level > 0) {
      if (below_perturbed && a != 0.0) {
        // absolute rounding floor may legitimately push one level deeper
        if (m != exact_level - 1 && m != exact_level) fail("perturbed level off");
      } else if (m != exact_level - 1) {
        fail("node level mismatch");
      }
    }

    const double renode = mont::q_node(ctx, node);
    if (ulp_distance(node, renode) > 4) fail("projection not idempotent");
  }

  // monotonicity sweeps: m never increases as x grows
  for (int sweep = 0; sweep < 20; ++sweep) {
    const double q = qdist(rng);
    const double a = ivdist(rng) ? 2.0 : 0.0;
    const double b = a == 2.0 ? 4.0 : 1.0;
    const QContext ctx(q, a, b);
    std::int64_t prev = std::numeric_limits<std::int64_t>::max();
    for (int i = 1; i < 100; ++i) {
      const double x = a + (b - a) * i / 100.0;
      const std::int64_t m = mont::m_index(ctx, x).m;
      if (m > prev) fail("level not monotone in x");
      prev = m;
    }
  }

  report(8, "node projection: bracketing, idempotence, monotonicity", ok,
         ok ? std::to_string(checked) + " draws checked" : why);
}

void parser_suite() {
  bool ok = true;
  std::string why;
  const auto expect = [&](bool cond, const std::string& msg) {
    if (!cond) {
      if (ok) why = msg;
      ok = false;
    }
  };

  try {
    expect(fx::parse("1+2*3").eval(0) == 7.0, "1+2*3");
    expect(fx::parse("2^3^2").eval(0) == 512.0, "2^3^2");
    expect(fx::parse("-2^2").eval(0) == -4.0, "-2^2");
    expect(fx::parse("t^2+1").eval(2) == 5.0, "t^2+1");

    const std::vector<std::string> corpus = {
        "t", "1 + t", "-t", "-(t + 1)", "2*(t + 1)", "t^2", "-2^2", "(-2)^2",
        "(t + 1)/(t - 1)", "2^3^2", "(2^3)^2", "t - (1 - t)", "t - 1 - t",
        "2/3/4", "2/(3/4)", "sqrt(t + 1)", "abs(-t)", "exp(-t^2)", "1.5e-2*t",
        "sin(cos(t))", "t*t*t", "t^t", "1 + 2 + 3 + 4", "1*2*3*4", "((t))",
        "2^-t", "t/2^t", "ln(t)/ln(2)", "abs(t - 0.5) + abs(t + 0.5)",
        "3.25", ".5*t", "5.", "1e3 + t", "2.5E+1", "t^(-2)", "cos(t)^2 + sin(t)^2",
        "exp(ln(t + 1))", "sqrt(t^2)", "(t + 1)*(t - 1)", "t/(1 + t^2)",
        "-t^2 + t - 1", "1/(1/(1/t))", "t^2^2", "abs(t)*abs(t)",
        "sin(t + 1) - sin(t - 1)", "2*3 + 4*5", "(1 + 2)*(3 + 4)",
        "t - -t", "ln(exp(1))", "cos(-t)",
    };
    int round_trips = 0;
    for (const std::string& src : corpus) {
      const fx::Expr e = fx::parse(src);
      if (fx::parse(e.str()) == e) ++round_trips;
      else expect(false, "round-trip failed for " + src);
    }
    expect(round_trips == static_cast<int>(corpus.size()), "round-trip count");
    expect(corpus.size() == 50, "corpus size");

    const auto offset_of = [](const std::string& src) -> std::ptrdiff_t {
      try {
        fx::parse(src);
      } catch (const qmont::SyntaxError& e) {
        return static_cast<std::ptrdiff_t>(e.offset());
      }
      return -1;
    };
    expect(offset_of("t +") == 3, "offset of 't +'");
    expect(offset_of("") == 0, "offset of empty");
    expect(offset_of("foo(t)") == 0, "offset of unknown ident");
    expect(offset_of("sin t") == 4, "offset of missing paren");
    expect(offset_of("(t") == 2, "offset of unclosed paren");
    expect(offset_of("1e+") == 3, "offset of bad exponent");
    expect(offset_of("t t") == 2, "offset of trailing token");
  } catch (const qmont::Error& e) {
    expect(false, std::string("unexpected error: ") + e.what());
  }

  report(9, "expression parser: precedence, round-trips, error offsets", ok,
         ok ? "50-expression corpus round-trips" : why);
}

}  // namespace

int main() {
  worked_counterexample();
  corrected_identity_grid();
  failure_law_grid();
  closed_form_integrals();
  classical_limits();
  fundamental_theorem();
  convexity_correction();
  node_projection_properties();
  parser_suite();
  if (failures == 0) std::printf("all acceptance checks passed\n");
  return failures;
}
