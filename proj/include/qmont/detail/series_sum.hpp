#pragma once

#include <cmath>
#include <cstdint>

#include "qmont/series.hpp"

namespace qmont::detail {

/// Sums term(0), term(1), ... under the shared q-lattice stopping rule:
/// stop after `consecutive_small` successive terms below tol*(1-q), then
/// report tail_estimate = |last term| * q/(1-q). Terms decay geometrically
/// with ratio q for bounded integrands, so the estimate envelopes the
/// discarded tail and the accumulated value is within tol of the full sum.
/// Accumulation uses long double; terms arrive in descending magnitude, so
/// naive summation error stays within a few ulps of the leading term.
template <class TermFn>
SeriesResult sum_q_series(double q, const SeriesControl& control, TermFn&& term) {
  const double threshold = control.tol * (1.0 - q);
  long double acc = 0.0L;
  double last = 0.0;
  int small_run = 0;
  bool converged = false;
  std::int64_t used = control.max_terms;
  for (std::int64_t k = 0; k < control.max_terms; ++k) {
    last = term(k);
    acc += last;
    if (std::fabs(last) < threshold) {
      if (++small_run >= control.consecutive_small) {
        converged = true;
        used = k + 1;
        break;
      }
    } else {
      small_run = 0;
    }
  }
  SeriesResult out;
  out.value = static_cast<double>(acc);
  out.terms_used = used;
  out.tail_estimate = std::fabs(last) * q / (1.0 - q);
  out.converged = converged;
  return out;
}

}  // namespace qmont::detail
