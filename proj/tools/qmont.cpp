// Command-line front end: evaluates q-derivatives and Jackson q-integrals,
// checks the original vs corrected Montgomery identity, scans for the
// original identity's failure off the q-lattice, and verifies the convexity
// step of the Ostrowski-type bounds. Emits a human table, JSON lines, or CSV.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmont/errors.hpp"
#include "qmont/funcexpr.hpp"
#include "qmont/montgomery.hpp"
#include "qmont/qcore.hpp"

namespace {

using qmont::QContext;
using qmont::RealFn;
using qmont::SeriesControl;
using qmont::SeriesResult;
namespace fx = qmont::funcexpr;
namespace mont = qmont::montgomery;
namespace qcore = qmont::qcore;

enum class Format { Table, Json, Csv };

std::string num6(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

// 17 significant digits: lossless double round-trip
std::string num17(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char b[8];
          std::snprintf(b, sizeof b, "\\u%04x", c);
          out += b;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// RFC 4180: quote when the field contains a comma, a quote, or a newline
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

class JsonLine {
 public:
  JsonLine& num(const char* k, double v) { return raw(k, num17(v)); }
  JsonLine& integer(const char* k, std::int64_t v) { return raw(k, std::to_string(v)); }
  JsonLine& boolean(const char* k, bool v) { return raw(k, v ? "true" : "false"); }
  JsonLine& text(const char* k, const std::string& v) {
    return raw(k, "\"" + json_escape(v) + "\"");
  }
  const std::string& str() {
    if (out_.back() != '}') out_ += '}';
    return out_;
  }

 private:
  JsonLine& raw(const char* k, const std::string& v) {
    out_ += first_ ? "\"" : ",\"";
    first_ = false;
    out_ += k;
    out_ += "\":";
    out_ += v;
    return *this;
  }
  std::string out_ = "{";
  bool first_ = true;
};

struct Common {
  std::string fsrc;
  double q = 0.5;
  double a = 0.0;
  double b = 1.0;
  double tol = 1e-12;
  std::int64_t max_terms = 1'000'000;
  std::string output = "table";
  bool strict = false;

  Format format() const {
    if (output == "json") return Format::Json;
    if (output == "csv") return Format::Csv;
    return Format::Table;
  }
  SeriesControl control() const {
    SeriesControl c;
    c.tol = tol;
    c.max_terms = max_terms;
    return c;
  }
  QContext context() const { return QContext(q, a, b); }
  RealFn function() const { return fx::as_realfn(fx::parse(fsrc), fsrc); }
};

void add_common(CLI::App* cmd, Common& o, bool need_q = true) {
  cmd->add_option("-f,--function", o.fsrc, "expression for f(t)")->required();
  if (need_q) {
    cmd->add_option("-q", o.q, "deformation parameter, 0 < q < 1")->required();
  }
  cmd->add_option("-a", o.a, "left endpoint")->required();
  cmd->add_option("-b", o.b, "right endpoint")->required();
  cmd->add_option("--tol", o.tol, "series stopping tolerance");
  cmd->add_option("--max-terms", o.max_terms, "series term cap");
  cmd->add_option("--output", o.output, "table, json, or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  cmd->add_flag("--strict", o.strict, "exit 4 when any series fails to converge");
}

int strict_verdict(const Common& c, bool all_converged) {
  if (all_converged || !c.strict) return 0;
  std::cerr << "error: series did not converge within " << c.max_terms
            << " terms (strict mode)\n";
  return 4;
}

// ---------------------------------------------------------------------------
// qderiv
// ---------------------------------------------------------------------------

int run_qderiv(const Common& c, double x, bool has_x, bool at_a) {
  if (!at_a && !has_x) {
    std::cerr << "error: qderiv needs -x (or --at-a for the limit at a)\n";
    return 2;
  }
  const QContext ctx = c.context();
  const RealFn f = c.function();
  const double where = at_a ? ctx.a() : x;
  const double value = at_a ? qcore::q_derivative_at_a(f, ctx, c.control())
                            : qcore::q_derivative(f, ctx, x);
  switch (c.format()) {
    case Format::Table:
      std::cout << "value = " << num6(value) << "\n";
      break;
    case Format::Json:
      std::cout << JsonLine().num("x", where).num("value", value).str() << "\n";
      break;
    case Format::Csv:
      std::cout << "x,value\n" << num17(where) << "," << num17(value) << "\n";
      break;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// qint
// ---------------------------------------------------------------------------

int run_qint(const Common& c, double x, double lower, bool has_lower) {
  const QContext ctx = c.context();
  const RealFn f = c.function();
  const SeriesResult r =
      has_lower ? qcore::jackson_integral_sub(f, ctx, lower, x, c.control())
                : qcore::jackson_integral(f, ctx, x, c.control());
  const double from = has_lower ? lower : ctx.a();
  switch (c.format()) {
    case Format::Table:
      std::cout << "value = " << num6(r.value) << "\n"
                << "terms_used = " << r.terms_used << "\n"
                << "tail_estimate = " << num6(r.tail_estimate) << "\n"
                << "converged = " << (r.converged ? "yes" : "no") << "\n";
      break;
    case Format::Json:
      std::cout << JsonLine()
                       .num("x", x)
                       .num("c", from)
                       .num("value", r.value)
                       .integer("terms_used", r.terms_used)
                       .num("tail_estimate", r.tail_estimate)
                       .boolean("converged", r.converged)
                       .str()
                << "\n";
      break;
    case Format::Csv:
      std::cout << "x,c,value,terms_used,tail_estimate,converged\n"
                << num17(x) << "," << num17(from) << "," << num17(r.value) << ","
                << r.terms_used << "," << num17(r.tail_estimate) << ","
                << (r.converged ? "true" : "false") << "\n";
      break;
  }
  return strict_verdict(c, r.converged);
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

int run_check(const Common& c, double x) {
  const QContext ctx = c.context();
  const RealFn f = c.function();
  const mont::IdentityReport rep = mont::check_identity(f, ctx, x, c.control());
  switch (c.format()) {
    case Format::Table:
      std::cout << "x = " << num6(rep.x) << "\n"
                << "node = " << num6(rep.node) << "\n"
                << "avg_integral = " << num6(rep.avg_integral) << "\n"
                << "lhs_original = " << num6(rep.lhs_original) << "\n"
                << "lhs_corrected = " << num6(rep.lhs_corrected) << "\n"
                << "rhs = " << num6(rep.rhs) << "\n"
                << "residual_original = " << num6(rep.residual_original) << "\n"
                << "residual_corrected = " << num6(rep.residual_corrected) << "\n";
      break;
    case Format::Json:
      std::cout << JsonLine()
                       .num("x", rep.x)
                       .num("node", rep.node)
                       .num("avg_integral", rep.avg_integral)
                       .num("lhs_original", rep.lhs_original)
                       .num("lhs_corrected", rep.lhs_corrected)
                       .num("rhs", rep.rhs)
                       .num("residual_original", rep.residual_original)
                       .num("residual_corrected", rep.residual_corrected)
                       .integer("rhs_terms", rep.series.terms_used)
                       .boolean("rhs_converged", rep.series.converged)
                       .integer("avg_terms", rep.avg_series.terms_used)
                       .boolean("avg_converged", rep.avg_series.converged)
                       .str()
                << "\n";
      break;
    case Format::Csv:
      std::cout << "x,node,avg_integral,lhs_original,lhs_corrected,rhs,"
                   "residual_original,residual_corrected\n"
                << num17(rep.x) << "," << num17(rep.node) << ","
                << num17(rep.avg_integral) << "," << num17(rep.lhs_original) << ","
                << num17(rep.lhs_corrected) << "," << num17(rep.rhs) << ","
                << num17(rep.residual_original) << ","
                << num17(rep.residual_corrected) << "\n";
      break;
  }
  return strict_verdict(c, rep.series.converged && rep.avg_series.converged);
}

// ---------------------------------------------------------------------------
// disprove
// ---------------------------------------------------------------------------

int run_disprove(const Common& c, std::int64_t points) {
  if (points < 0) {
    std::cerr << "error: --points must be non-negative\n";
    return 2;
  }
  const QContext ctx = c.context();
  const RealFn f = c.function();

  // uniform interior grid, then the first 5 exact lattice nodes so the
  // on-node validity is visible in every run
  std::vector<double> xs;
  for (std::int64_t i = 1; i <= points; ++i)
    xs.push_back(ctx.a() + (ctx.b() - ctx.a()) * static_cast<double>(i) /
                               static_cast<double>(points + 1));
  double p = 1.0;
  for (int k = 1; k <= 5; ++k) {
    p *= ctx.q();
    xs.push_back(ctx.a() + p * (ctx.b() - ctx.a()));
  }

  const std::vector<mont::ScanRow> rows = mont::residual_scan(f, ctx, xs, c.control());

  bool all_converged = true;
  if (c.format() == Format::Table) {
    std::printf("%-14s %-14s %-18s %-18s\n", "x", "node", "residual_original",
                "residual_corrected");
  } else if (c.format() == Format::Csv) {
    std::cout << "x,node,residual_original,residual_corrected,error\n";
  }
  for (const mont::ScanRow& row : rows) {
    if (row.report) {
      const mont::IdentityReport& rep = *row.report;
      all_converged = all_converged && rep.series.converged && rep.avg_series.converged;
      switch (c.format()) {
        case Format::Table:
          std::printf("%-14s %-14s %-18s %-18s\n", num6(rep.x).c_str(),
                      num6(rep.node).c_str(), num6(rep.residual_original).c_str(),
                      num6(rep.residual_corrected).c_str());
          break;
        case Format::Json:
          std::cout << JsonLine()
                            .num("x", rep.x)
                            .num("node", rep.node)
                            .num("residual_original", rep.residual_original)
                            .num("residual_corrected", rep.residual_corrected)
                            .str()
                    << "\n";
          break;
        case Format::Csv:
          std::cout << num17(rep.x) << "," << num17(rep.node) << ","
                    << num17(rep.residual_original) << ","
                    << num17(rep.residual_corrected) << ",\n";
          break;
      }
    } else {
      switch (c.format()) {
        case Format::Table:
          std::printf("%-14s error: %s\n", num6(row.x).c_str(), row.error.c_str());
          break;
        case Format::Json:
          std::cout << JsonLine().num("x", row.x).text("error", row.error).str()
                    << "\n";
          break;
        case Format::Csv:
          std::cout << num17(row.x) << ",,,," << csv_field(row.error) << "\n";
          break;
      }
    }
  }
  return strict_verdict(c, all_converged);
}

// ---------------------------------------------------------------------------
// convexity
// ---------------------------------------------------------------------------

int run_convexity(const Common& c, double r, std::int64_t grid) {
  if (grid < 2) {
    std::cerr << "error: --grid must be at least 2\n";
    return 2;
  }
  const QContext ctx = c.context();
  const RealFn f = c.function();
  std::vector<double> ts;
  ts.reserve(grid);
  for (std::int64_t j = 0; j < grid; ++j)
    ts.push_back(static_cast<double>(j) / static_cast<double>(grid - 1));

  const mont::ConvexityReport rep =
      mont::convexity_step_check(f, ctx, r, ts, c.control());

  const auto emit_rows = [&](const char* bound,
                             const std::vector<mont::ConvexityViolation>& vs) {
    for (const mont::ConvexityViolation& v : vs) {
      switch (c.format()) {
        case Format::Table:
          std::printf("  %-10s t = %-10s lhs = %-12s bound = %s\n", bound,
                      num6(v.t).c_str(), num6(v.lhs).c_str(),
                      num6(v.rhs_bound).c_str());
          break;
        case Format::Json:
          std::cout << JsonLine()
                            .text("bound", bound)
                            .num("t", v.t)
                            .num("lhs", v.lhs)
                            .num("rhs_bound", v.rhs_bound)
                            .str()
                    << "\n";
          break;
        case Format::Csv:
          std::cout << bound << "," << num17(v.t) << "," << num17(v.lhs) << ","
                    << num17(v.rhs_bound) << "\n";
          break;
      }
    }
  };

  switch (c.format()) {
    case Format::Table:
      std::cout << "r = " << num6(rep.r) << "\n"
                << "|D_q f at a| = " << num6(rep.deriv_at_a) << " (limit)\n"
                << "|D_q f at b| = " << num6(rep.deriv_at_b) << "\n"
                << "corrected bound: " << rep.corrected_violations.size()
                << " violations on " << ts.size() << " grid points\n"
                << "erroneous bound: " << rep.erroneous_violations.size()
                << " violations on " << ts.size() << " grid points\n";
      break;
    case Format::Json:
      std::cout << JsonLine()
                       .num("r", rep.r)
                       .integer("grid_points", static_cast<std::int64_t>(ts.size()))
                       .num("deriv_at_a", rep.deriv_at_a)
                       .num("deriv_at_b", rep.deriv_at_b)
                       .integer("corrected_violations",
                                static_cast<std::int64_t>(rep.corrected_violations.size()))
                       .integer("erroneous_violations",
                                static_cast<std::int64_t>(rep.erroneous_violations.size()))
                       .str()
                << "\n";
      break;
    case Format::Csv:
      std::cout << "bound,t,lhs,rhs_bound\n";
      break;
  }
  emit_rows("corrected", rep.corrected_violations);
  emit_rows("erroneous", rep.erroneous_violations);
  return 0;
}

// ---------------------------------------------------------------------------
// limit-check
// ---------------------------------------------------------------------------

int run_limit_check(const Common& c, double x) {
  const RealFn f = c.function();
  const double fd = qcore::classical_derivative_fd(f, x, 1e-6);

  bool all_converged = true;
  struct Row {
    double q, qd, qi, simpson;
  };
  std::vector<Row> rows;
  for (int j = 3; j <= 10; ++j) {
    const double qj = 1.0 - std::ldexp(1.0, -j);  // 1 - 2^-j
    const QContext ctx(qj, c.a, c.b);
    const double qd = qcore::q_derivative(f, ctx, x);
    const SeriesResult qi = qcore::jackson_integral(f, ctx, x, c.control());
    all_converged = all_converged && qi.converged;
    rows.push_back({qj, qd, qi.value,
                    x > c.a ? qcore::riemann_integral_oracle(f, c.a, x, 256) : 0.0});
  }

  if (c.format() == Format::Table) {
    std::printf("%-14s %-14s %-12s %-14s %-12s\n", "q", "qderiv", "deriv_err",
                "qint", "int_err");
  } else if (c.format() == Format::Csv) {
    std::cout << "q,qderiv,fd_oracle,deriv_err,qint,simpson_oracle,int_err\n";
  }
  for (const Row& row : rows) {
    const double derr = std::fabs(row.qd - fd);
    const double ierr = std::fabs(row.qi - row.simpson);
    switch (c.format()) {
      case Format::Table:
        std::printf("%-14s %-14s %-12s %-14s %-12s\n", num6(row.q).c_str(),
                    num6(row.qd).c_str(), num6(derr).c_str(),
                    num6(row.qi).c_str(), num6(ierr).c_str());
        break;
      case Format::Json:
        std::cout << JsonLine()
                          .num("q", row.q)
                          .num("qderiv", row.qd)
                          .num("fd_oracle", fd)
                          .num("deriv_err", derr)
                          .num("qint", row.qi)
                          .num("simpson_oracle", row.simpson)
                          .num("int_err", ierr)
                          .str()
                  << "\n";
        break;
      case Format::Csv:
        std::cout << num17(row.q) << "," << num17(row.qd) << "," << num17(fd)
                  << "," << num17(derr) << "," << num17(row.qi) << ","
                  << num17(row.simpson) << "," << num17(ierr) << "\n";
        break;
    }
  }
  return strict_verdict(c, all_converged);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "q-calculus numerics: q-derivatives, Jackson q-integrals, and the "
      "corrected quantum Montgomery identity"};
  app.require_subcommand(1);

  Common qderiv_opts, qint_opts, check_opts, disprove_opts, convexity_opts,
      limit_opts;
  double x_qderiv = 0.0, x_qint = 0.0, x_check = 0.0, x_limit = 0.0;
  double c_qint = 0.0;
  double r_conv = 1.0;
  std::int64_t points = 50, grid = 101;
  bool at_a = false;

  CLI::App* cmd_qderiv =
      app.add_subcommand("qderiv", "q-derivative of f at x (or the limit at a)");
  add_common(cmd_qderiv, qderiv_opts);
  CLI::Option* xopt_qderiv = cmd_qderiv->add_option("-x", x_qderiv, "evaluation point");
  cmd_qderiv->add_flag("--at-a", at_a, "evaluate the limit at the left endpoint");

  CLI::App* cmd_qint =
      app.add_subcommand("qint", "Jackson q-integral of f from a (or c) to x");
  add_common(cmd_qint, qint_opts);
  cmd_qint->add_option("-x", x_qint, "upper limit")->required();
  CLI::Option* copt = cmd_qint->add_option("-c", c_qint, "lower limit (default a)");

  CLI::App* cmd_check = app.add_subcommand(
      "check", "evaluate the original and corrected Montgomery identities at x");
  add_common(cmd_check, check_opts);
  cmd_check->add_option("-x", x_check, "evaluation point")->required();

  CLI::App* cmd_disprove = app.add_subcommand(
      "disprove",
      "scan residuals of the original identity over a grid plus exact nodes");
  add_common(cmd_disprove, disprove_opts);
  cmd_disprove->add_option("--points", points, "number of uniform interior points");

  CLI::App* cmd_convexity = app.add_subcommand(
      "convexity", "grid-check the corrected vs erroneous convexity bound");
  add_common(cmd_convexity, convexity_opts);
  cmd_convexity->add_option("-r", r_conv, "exponent, r >= 1");
  cmd_convexity->add_option("--grid", grid, "t-grid size");

  CLI::App* cmd_limit = app.add_subcommand(
      "limit-check", "compare against classical oracles along q -> 1");
  add_common(cmd_limit, limit_opts, /*need_q=*/false);
  cmd_limit->add_option("-x", x_limit, "evaluation point")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_qderiv)
      return run_qderiv(qderiv_opts, x_qderiv,
                        xopt_qderiv->count() > 0, at_a);
    if (*cmd_qint)
      return run_qint(qint_opts, x_qint, c_qint, copt->count() > 0);
    if (*cmd_check) return run_check(check_opts, x_check);
    if (*cmd_disprove) return run_disprove(disprove_opts, points);
    if (*cmd_convexity) return run_convexity(convexity_opts, r_conv, grid);
    if (*cmd_limit) return run_limit_check(limit_opts, x_limit);
  } catch (const qmont::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const qmont::CapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const qmont::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
