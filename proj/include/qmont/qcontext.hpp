#pragma once

#include <functional>
#include <string>
#include <utility>

namespace qmont {

/// The deformation parameter and working interval, 0 < q < 1, a < b.
/// Immutable after construction; every q-calculus operation takes one.
class QContext {
 public:
  QContext(double q, double a, double b);

  double q() const noexcept { return q_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

 private:
  double q_;
  double a_;
  double b_;
};

/// A scalar function of one real variable with a display label.
///
/// Evaluation must be deterministic and side-effect free. A non-finite
/// result is reported as an EvalError rather than propagated as NaN/inf,
/// so domain problems surface at the point of evaluation.
class RealFn {
 public:
  RealFn(std::string label, std::function<double(double)> fn)
      : label_(std::move(label)), fn_(std::move(fn)) {}

  /// Evaluates f(x). Throws EvalError on a non-finite result; errors
  /// thrown by the wrapped callable pass through unchanged.
  double operator()(double x) const;

  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
  std::function<double(double)> fn_;
};

}  // namespace qmont
