#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmont/errors.hpp"
#include "qmont/funcexpr.hpp"
#include "qmont/montgomery.hpp"
#include "qmont/qcore.hpp"

namespace py = pybind11;

using qmont::QContext;
using qmont::RealFn;
using qmont::SeriesControl;
using qmont::SeriesResult;
namespace fx = qmont::funcexpr;
namespace mont = qmont::montgomery;
namespace qcore = qmont::qcore;

PYBIND11_MODULE(_qmont, m) {
  m.doc() =
      "q-calculus numerics: q-derivatives, Jackson q-integrals, and the "
      "corrected quantum Montgomery identity";

  // Mirror the C++ hierarchy: every exception type derives from qmont.Error,
  // and each also subclasses the closest python builtin so idiomatic
  // `except ValueError` style handlers keep working.
  static py::handle exc_error =
      PyErr_NewException("qmont._qmont.Error", nullptr, nullptr);
  m.attr("Error") = exc_error;
  const auto new_exception = [&m](const char* name, PyObject* builtin) {
    const std::string qualified = std::string("qmont._qmont.") + name;
    py::tuple bases =
        py::make_tuple(exc_error, py::reinterpret_borrow<py::object>(builtin));
    py::handle exc =
        PyErr_NewException(qualified.c_str(), bases.ptr(), nullptr);
    m.attr(name) = exc;
    return exc;
  };
  static py::handle exc_domain = new_exception("DomainError", PyExc_ValueError);
  static py::handle exc_eval =
      new_exception("EvalError", PyExc_ArithmeticError);
  static py::handle exc_convergence =
      new_exception("ConvergenceError", PyExc_RuntimeError);
  static py::handle exc_cap = new_exception("CapError", PyExc_RuntimeError);
  static py::handle exc_syntax =
      new_exception("SyntaxError", PyExc_ValueError);

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const qmont::SyntaxError& e) {
      py::set_error(exc_syntax, e.what());
    } catch (const qmont::DomainError& e) {
      py::set_error(exc_domain, e.what());
    } catch (const qmont::EvalError& e) {
      py::set_error(exc_eval, e.what());
    } catch (const qmont::ConvergenceError& e) {
      py::set_error(exc_convergence, e.what());
    } catch (const qmont::CapError& e) {
      py::set_error(exc_cap, e.what());
    } catch (const qmont::Error& e) {
      py::set_error(exc_error, e.what());
    }
  });

  py::class_<SeriesControl>(m, "SeriesControl",
                            "Stopping rule for the q-lattice series.")
      .def(py::init<>())
      .def_readwrite("tol", &SeriesControl::tol)
      .def_readwrite("max_terms", &SeriesControl::max_terms)
      .def_readwrite("consecutive_small", &SeriesControl::consecutive_small);

  py::class_<SeriesResult>(m, "SeriesResult", "Outcome of a truncated series.")
      .def_readonly("value", &SeriesResult::value)
      .def_readonly("terms_used", &SeriesResult::terms_used)
      .def_readonly("tail_estimate", &SeriesResult::tail_estimate)
      .def_readonly("converged", &SeriesResult::converged)
      .def("__repr__", [](const SeriesResult& r) {
        return "SeriesResult(value=" + std::to_string(r.value) +
               ", terms_used=" + std::to_string(r.terms_used) +
               ", converged=" + (r.converged ? std::string("True") : "False") + ")";
      });

  py::class_<QContext>(m, "QContext",
                       "Deformation parameter and interval: 0 < q < 1, a < b.")
      .def(py::init<double, double, double>(), py::arg("q"), py::arg("a"),
           py::arg("b"))
      .def_property_readonly("q", &QContext::q)
      .def_property_readonly("a", &QContext::a)
      .def_property_readonly("b", &QContext::b);

  py::class_<RealFn>(m, "RealFn",
                     "A labeled scalar function; non-finite values raise EvalError.")
      .def(py::init<std::string, std::function<double(double)>>(),
           py::arg("label"), py::arg("fn"))
      .def("__call__", &RealFn::operator())
      .def_property_readonly("label", &RealFn::label);

  py::class_<mont::NodeIndex>(m, "NodeIndex")
      .def_readonly("m", &mont::NodeIndex::m);

  py::class_<mont::IdentityReport>(m, "IdentityReport",
                                   "Both Montgomery identities evaluated at x.")
      .def_readonly("x", &mont::IdentityReport::x)
      .def_readonly("node", &mont::IdentityReport::node)
      .def_readonly("avg_integral", &mont::IdentityReport::avg_integral)
      .def_readonly("lhs_original", &mont::IdentityReport::lhs_original)
      .def_readonly("lhs_corrected", &mont::IdentityReport::lhs_corrected)
      .def_readonly("rhs", &mont::IdentityReport::rhs)
      .def_readonly("residual_original", &mont::IdentityReport::residual_original)
      .def_readonly("residual_corrected", &mont::IdentityReport::residual_corrected)
      .def_readonly("series", &mont::IdentityReport::series)
      .def_readonly("avg_series", &mont::IdentityReport::avg_series);

  py::class_<mont::ConvexityViolation>(m, "ConvexityViolation")
      .def_readonly("t", &mont::ConvexityViolation::t)
      .def_readonly("lhs", &mont::ConvexityViolation::lhs)
      .def_readonly("rhs_bound", &mont::ConvexityViolation::rhs_bound);

  py::class_<mont::ConvexityReport>(m, "ConvexityReport")
      .def_readonly("r", &mont::ConvexityReport::r)
      .def_readonly("t_grid", &mont::ConvexityReport::t_grid)
      .def_readonly("corrected_violations", &mont::ConvexityReport::corrected_violations)
      .def_readonly("erroneous_violations", &mont::ConvexityReport::erroneous_violations)
      .def_readonly("deriv_at_a", &mont::ConvexityReport::deriv_at_a)
      .def_readonly("deriv_at_b", &mont::ConvexityReport::deriv_at_b);

  py::class_<mont::ScanRow>(m, "ScanRow",
                            "One scan point; report is None when error is set.")
      .def_readonly("x", &mont::ScanRow::x)
      .def_readonly("report", &mont::ScanRow::report)
      .def_readonly("error", &mont::ScanRow::error);

  py::class_<fx::Expr>(m, "Expr", "Immutable expression tree over t.")
      .def("eval", &fx::Expr::eval, py::arg("t"))
      .def("__str__", &fx::Expr::str)
      .def("__repr__",
           [](const fx::Expr& e) { return "Expr('" + e.str() + "')"; })
      .def("__eq__",
           [](const fx::Expr& a, const fx::Expr& b) { return a == b; },
           py::is_operator());

  m.def("q_derivative", &qcore::q_derivative, py::arg("f"), py::arg("ctx"),
        py::arg("x"), "q-derivative of f at x, a < x <= b.");
  m.def("q_derivative_at_a", &qcore::q_derivative_at_a, py::arg("f"),
        py::arg("ctx"), py::arg("control") = SeriesControl{},
        "Limit of the q-derivative at the left endpoint.");
  m.def("jackson_integral", &qcore::jackson_integral, py::arg("f"),
        py::arg("ctx"), py::arg("x"), py::arg("control") = SeriesControl{},
        "Jackson q-integral of f from a to x.");
  m.def("jackson_integral_sub", &qcore::jackson_integral_sub, py::arg("f"),
        py::arg("ctx"), py::arg("c"), py::arg("x"),
        py::arg("control") = SeriesControl{},
        "Jackson q-integral of f from c to x, a < c < x.");
  m.def("classical_derivative_fd", &qcore::classical_derivative_fd, py::arg("f"),
        py::arg("x"), py::arg("h"), "Central-difference oracle.");
  m.def("riemann_integral_oracle", &qcore::riemann_integral_oracle, py::arg("f"),
        py::arg("a"), py::arg("x"), py::arg("n"), "Composite Simpson oracle.");

  m.def("kernel_eval", &mont::kernel_eval, py::arg("ctx"), py::arg("x"),
        py::arg("t"), "Montgomery kernel at t with breakpoint (x-a)/(b-a).");
  m.def("m_index", &mont::m_index, py::arg("ctx"), py::arg("x"),
        py::arg("max_iter") = mont::kDefaultLevelCap,
        "Lattice level m with q^{m+1} <= (x-a)/(b-a) < q^m.");
  m.def("q_node", &mont::q_node, py::arg("ctx"), py::arg("x"),
        "Projection of x onto the lattice node a + q^{m+1}(b-a).");
  m.def("montgomery_rhs", &mont::montgomery_rhs, py::arg("f"), py::arg("ctx"),
        py::arg("x"), py::arg("control") = SeriesControl{},
        "Kernel-weighted series side of the identity.");
  m.def("original_lhs", &mont::original_lhs, py::arg("f"), py::arg("ctx"),
        py::arg("x"), py::arg("control") = SeriesControl{},
        "f(x) minus the q-average of f.");
  m.def("corrected_lhs", &mont::corrected_lhs, py::arg("f"), py::arg("ctx"),
        py::arg("x"), py::arg("control") = SeriesControl{},
        "f(node) minus the q-average of f.");
  m.def("check_identity", &mont::check_identity, py::arg("f"), py::arg("ctx"),
        py::arg("x"), py::arg("control") = SeriesControl{},
        "Evaluate both identities at x and package the residuals.");
  m.def("residual_scan", &mont::residual_scan, py::arg("f"), py::arg("ctx"),
        py::arg("xs"), py::arg("control") = SeriesControl{},
        "check_identity over a list of points; failures recorded per row.");
  m.def("convexity_step_check", &mont::convexity_step_check, py::arg("f"),
        py::arg("ctx"), py::arg("r"), py::arg("t_grid"),
        py::arg("control") = SeriesControl{},
        "Grid-check the corrected and erroneous convexity bounds.");

  m.def("parse", &fx::parse, py::arg("src"),
        "Parse an expression over t; SyntaxError carries the byte offset.");
  m.def("as_realfn", &fx::as_realfn, py::arg("expr"), py::arg("label"),
        "Wrap an expression as a labeled function.");
  m.def(
      "realfn",
      [](const std::string& src) { return fx::as_realfn(fx::parse(src), src); },
      py::arg("src"), "Parse src and wrap it as a RealFn labeled by the source.");
}
