"""q-calculus numerics: q-derivatives, Jackson q-integrals, and the
corrected quantum Montgomery identity.

Everything is implemented in the C++ extension ``qmont._qmont``; this
package re-exports the public surface.
"""

from ._qmont import (
    CapError,
    ConvergenceError,
    ConvexityReport,
    ConvexityViolation,
    DomainError,
    Error,
    EvalError,
    Expr,
    IdentityReport,
    NodeIndex,
    QContext,
    RealFn,
    ScanRow,
    SeriesControl,
    SeriesResult,
    SyntaxError,
    as_realfn,
    check_identity,
    classical_derivative_fd,
    convexity_step_check,
    corrected_lhs,
    jackson_integral,
    jackson_integral_sub,
    kernel_eval,
    m_index,
    montgomery_rhs,
    original_lhs,
    parse,
    q_derivative,
    q_derivative_at_a,
    q_node,
    realfn,
    residual_scan,
    riemann_integral_oracle,
)

__all__ = [
    "CapError",
    "ConvergenceError",
    "ConvexityReport",
    "ConvexityViolation",
    "DomainError",
    "Error",
    "EvalError",
    "Expr",
    "IdentityReport",
    "NodeIndex",
    "QContext",
    "RealFn",
    "ScanRow",
    "SeriesControl",
    "SeriesResult",
    "SyntaxError",
    "as_realfn",
    "check_identity",
    "classical_derivative_fd",
    "convexity_step_check",
    "corrected_lhs",
    "jackson_integral",
    "jackson_integral_sub",
    "kernel_eval",
    "m_index",
    "montgomery_rhs",
    "original_lhs",
    "parse",
    "q_derivative",
    "q_derivative_at_a",
    "q_node",
    "realfn",
    "residual_scan",
    "riemann_integral_oracle",
]

__version__ = "1.0.0"
