#pragma once

#include <cstdint>

namespace qmont {

/// Truncation policy for the infinite q-lattice series.
///
/// Summation stops once `consecutive_small` successive terms fall below
/// tol*(1-q) in magnitude, or the hard cap `max_terms` is reached. Requiring
/// several small terms in a row keeps isolated zeros of f at lattice nodes
/// from stopping the sum early.
struct SeriesControl {
  double tol = 1e-12;
  std::int64_t max_terms = 1'000'000;
  int consecutive_small = 3;

  /// Throws DomainError unless tol > 0, max_terms >= 1, consecutive_small >= 1.
  void validate() const;
};

/// Outcome of a truncated series evaluation.
///
/// `tail_estimate` is |last term| * q/(1-q), the geometric envelope of the
/// discarded tail. `converged == false` means the term cap was hit, in which
/// case terms_used == max_terms.
struct SeriesResult {
  double value = 0.0;
  std::int64_t terms_used = 0;
  double tail_estimate = 0.0;
  bool converged = false;
};

}  // namespace qmont
