#pragma once

// Numerical integration of functionals g(log p(x), log q(x)) over the support
// of two members of one family. Shared by the chi and reference oracles.

#include "fchi/chi.hpp"
#include "fchi/families.hpp"
#include "fchi/quadrature.hpp"

#include <functional>
#include <optional>
#include <span>

namespace fchi::detail {

using LogPairFn = std::function<double(double lp, double lq)>;

/// Upper bound on sum_{y > x} |g(y)| for the Poisson summation, from the
/// count x and the log densities at x; +infinity while unknown.
using CountTail = std::function<double(long x, double lp, double lq)>;

struct PairPlan {
  /// Interval for gaussian_iso (along the mean difference, from theta_p) or
  /// trunc_exp; defaults are chosen per family when absent.
  std::optional<Domain> domain;
  CountTail count_tail;
  /// Slowest exponential decay rate in x of the integrand (singly truncated
  /// exponential only); must be > 0.
  double decay = 0.0;
  /// Order-like width parameter for the default Gaussian window.
  int spread = 1;
};

QuadratureResult integrate_pair(const AefFamily& fam, std::span<const double> theta_p,
                                std::span<const double> theta_q, const LogPairFn& g,
                                const PairPlan& plan);

/// p (r - lambda)^i with r = q / p, computed as sign * exp(lp + i log|r - lambda|).
double power_integrand(double lp, double lq, int i, double lambda, bool absolute);

}  // namespace fchi::detail
