#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmont/qcontext.hpp"
#include "qmont/series.hpp"

namespace qmont::montgomery {

/// Iteration cap for the lattice level search when no SeriesControl is in
/// play; matches the SeriesControl default max_terms.
inline constexpr std::int64_t kDefaultLevelCap = 1'000'000;

/// The lattice level m of a point x in (a, b):
///
///   q^{m+1} <= (x - a)/(b - a) < q^m
struct NodeIndex {
  std::int64_t m = 0;
};

/// One evaluation of both versions of the quantum Montgomery identity at a
/// point x. The identity compares
///
///   lhs - (1/(b-a)) int_a^b f d_q^a t   against
///   rhs = (b-a) int_0^1 K_{q,x}(t) D_q^a f(tb + (1-t)a) d_q^0 t
///
/// with lhs = f(x) in the original form and lhs = f(node) in the corrected
/// form, node = a + q^{m+1}(b - a). The corrected residual vanishes up to
/// series truncation; the original residual equals f(x) - f(node), so it is
/// zero only when x is itself a lattice node.
struct IdentityReport {
  double x = 0.0;
  double node = 0.0;
  double avg_integral = 0.0;  // (1/(b-a)) int_a^b f d_q^a t
  double lhs_original = 0.0;  // f(x) - avg_integral
  double lhs_corrected = 0.0; // f(node) - avg_integral
  double rhs = 0.0;
  double residual_original = 0.0;  // lhs_original - rhs
  double residual_corrected = 0.0; // lhs_corrected - rhs
  SeriesResult series;      // rhs series diagnostics
  SeriesResult avg_series;  // int_a^b series diagnostics
};

/// One grid point where a convexity bound failed: lhs > rhs_bound + tol.
struct ConvexityViolation {
  double t = 0.0;
  double lhs = 0.0;
  double rhs_bound = 0.0;
};

/// Grid check of the convexity step used by the Ostrowski-type bounds.
/// For each t the quantity |D_q^a f(tb + (1-t)a)|^r is compared against
///
///   corrected:  t |D_q^a f(b)|^r + (1-t) |D_q^a f(a)|^r
///   erroneous:  t |D_q^a f(a)|^r + (1-t) |D_q^a f(b)|^r   (endpoints swapped)
///
/// For convex |D_q^a f|^r the corrected bound never fails; the erroneous
/// one generally does.
struct ConvexityReport {
  double r = 1.0;
  std::vector<double> t_grid;
  std::vector<ConvexityViolation> corrected_violations;
  std::vector<ConvexityViolation> erroneous_violations;
  double deriv_at_a = 0.0;  // |D_q^a f(a)|, via the limit at a
  double deriv_at_b = 0.0;  // |D_q^a f(b)|
};

/// One row of a residual scan. `report` is empty when the evaluation at x
/// failed, in which case `error` holds the message and the scan continued.
struct ScanRow {
  double x = 0.0;
  std::optional<IdentityReport> report;
  std::string error;
};

/// The Montgomery kernel on [0, 1] with breakpoint r = (x - a)/(b - a):
///
///   K_{q,x}(t) = qt     for 0 <= t <= r,
///   K_{q,x}(t) = qt - 1 for r < t <= 1.
///
/// The breakpoint itself belongs to the first branch. Requires a < x < b
/// and t in [0, 1].
double kernel_eval(const QContext& ctx, double x, double t);

/// The unique level m >= 0 with q^{m+1} <= (x - a)/(b - a) < q^m, found by
/// iterated multiplication rather than floating logarithms so that exact
/// and near-node x classify onto the node. Requires a < x < b; throws
/// CapError when the level would exceed max_iter (x pathologically close
/// to a).
NodeIndex m_index(const QContext& ctx, double x,
                  std::int64_t max_iter = kDefaultLevelCap);

/// The lattice node the corrected identity evaluates f at:
///
///   q_node(x) = a + q^{m+1}(b - a),  m = m_index(x).
///
/// Projection is idempotent: nodes map to themselves.
double q_node(const QContext& ctx, double x);

/// The kernel-weighted series
///
///   (b-a)(1-q) sum_{k>=0} q^k K_{q,x}(q^k) D_q^a f(a + q^k (b-a))
///
/// with the kernel branch picked by the integer split k <= m vs k >= m+1
/// (K(q^k) = q^{k+1} - 1 resp. q^{k+1}), never by comparing q^k against the
/// breakpoint in floating point.
SeriesResult montgomery_rhs(const RealFn& f, const QContext& ctx, double x,
                            const SeriesControl& control = {});

/// f(x) - (1/(b-a)) int_a^b f d_q^a t, the left side of the original
/// (uncorrected) identity. Requires a < x < b.
double original_lhs(const RealFn& f, const QContext& ctx, double x,
                    const SeriesControl& control = {});

/// f(q_node(x)) - (1/(b-a)) int_a^b f d_q^a t, the left side of the
/// corrected identity. Requires a < x < b.
double corrected_lhs(const RealFn& f, const QContext& ctx, double x,
                     const SeriesControl& control = {});

/// Evaluates both identities at x and packages the residuals.
IdentityReport check_identity(const RealFn& f, const QContext& ctx, double x,
                              const SeriesControl& control = {});

/// check_identity over a list of points, order-preserving. Per-point
/// failures are recorded in the row and the scan continues.
std::vector<ScanRow> residual_scan(const RealFn& f, const QContext& ctx,
                                   const std::vector<double>& xs,
                                   const SeriesControl& control = {});

/// Checks the corrected and the erroneous convexity bound on a t-grid in
/// [0, 1]. Requires r >= 1. D_q^a f(b) is evaluated directly; D_q^a f(a)
/// via the limit at a, whose ConvergenceError propagates.
ConvexityReport convexity_step_check(const RealFn& f, const QContext& ctx,
                                     double r,
                                     const std::vector<double>& t_grid,
                                     const SeriesControl& control = {});

}  // namespace qmont::montgomery
