#pragma once

#include <functional>
#include <span>

namespace fchi {

struct QuadratureResult {
  double value = 0.0;
  /// Estimated absolute error.
  double error = 0.0;
};

/// Adaptive 61-point Gauss-Kronrod integration of f over [lo, hi], split at
/// the interior points of `breaks` (which must be increasing).
QuadratureResult integrate_interval(const std::function<double(double)>& f, double lo, double hi,
                                    std::span<const double> breaks = {}, double rel_tol = 1e-13);

/// Sums term(0) + term(1) + ... over the nonnegative integers.
/// After term x has been added, tail_bound(x, term(x)) must return an upper
/// bound on sum_{y > x} |term(y)| (or +infinity while none is known); the sum
/// stops once that bound is below max(rel_tol * |sum|, abs_tol).
/// Throws DivergenceError after max_terms terms.
QuadratureResult sum_counts(const std::function<double(long)>& term,
                            const std::function<double(long, double)>& tail_bound,
                            double rel_tol = 1e-16, double abs_tol = 1e-300,
                            long max_terms = 1000000);

}  // namespace fchi
