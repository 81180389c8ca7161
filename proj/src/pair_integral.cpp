#include "pair_integral.hpp"

#include "fchi/errors.hpp"
#include "fchi/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace fchi::detail {

namespace {

QuadratureResult gaussian_pair(std::span<const double> theta_p, std::span<const double> theta_q,
                               const LogPairFn& g, const PairPlan& plan) {
  // Coordinates orthogonal to theta_q - theta_p carry the same marginal
  // under p and q and integrate out.
  double d2 = 0.0;
  for (std::size_t k = 0; k < theta_p.size(); ++k) d2 += (theta_q[k] - theta_p[k]) * (theta_q[k] - theta_p[k]);
  const double delta = std::sqrt(d2);
  const double c = 0.5 * std::log(2.0 * std::numbers::pi);
  Domain dom = plan.domain.value_or(
      Domain{std::min(0.0, plan.spread * delta) - 12.0, std::max(0.0, plan.spread * delta) + 12.0});
  std::vector<double> breaks;
  for (double t = std::ceil(dom.lo) + 2.0; t < dom.hi; t += 2.0) breaks.push_back(t);
  auto f = [&](double t) {
    const double lp = -0.5 * t * t - c;
    const double lq = -0.5 * (t - delta) * (t - delta) - c;
    return g(lp, lq);
  };
  return integrate_interval(f, dom.lo, dom.hi, breaks);
}

QuadratureResult trunc_exp_pair(const AefFamily& fam, std::span<const double> theta_p,
                                std::span<const double> theta_q, const LogPairFn& g,
                                const PairPlan& plan) {
  const double a = fam.trunc_a();
  const auto b = fam.trunc_b();
  double lo = a;
  double hi = 0.0;
  std::vector<double> breaks;
  if (b) {
    hi = *b;
    for (int s = 1; s < 8; ++s) breaks.push_back(a + (hi - a) * s / 8.0);
  } else {
    if (!(plan.decay > 0.0)) throw DivergenceError("integrand does not decay on [a, inf)");
    hi = a + 60.0 / plan.decay;
    for (double s : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) breaks.push_back(a + s / plan.decay);
  }
  if (plan.domain) {
    lo = std::max(lo, plan.domain->lo);
    hi = std::min(hi, plan.domain->hi);
  }
  const double Fp = fam.log_normalizer(theta_p);
  const double Fq = fam.log_normalizer(theta_q);
  auto f = [&](double x) { return g(-theta_p[0] * x - Fp, -theta_q[0] * x - Fq); };
  return integrate_interval(f, lo, hi, breaks);
}

QuadratureResult poisson_pair(std::span<const double> theta_p, std::span<const double> theta_q,
                              const LogPairFn& g, const PairPlan& plan) {
  const double lam_p = std::exp(theta_p[0]);
  const double lam_q = std::exp(theta_q[0]);
  auto log_pmf = [](long x, double theta, double lam) {
    return static_cast<double>(x) * theta - lam - std::lgamma(static_cast<double>(x) + 1.0);
  };
  auto term = [&](long x) { return g(log_pmf(x, theta_p[0], lam_p), log_pmf(x, theta_q[0], lam_q)); };
  auto tail = [&](long x, double) {
    return plan.count_tail(x, log_pmf(x, theta_p[0], lam_p), log_pmf(x, theta_q[0], lam_q));
  };
  return sum_counts(term, tail);
}

QuadratureResult categorical_pair(const AefFamily& fam, std::span<const double> theta_p,
                                  std::span<const double> theta_q, const LogPairFn& g) {
  const auto p = fam.categorical_probs(theta_p);
  const auto q = fam.categorical_probs(theta_q);
  CompensatedSum sum;
  for (std::size_t s = 0; s < p.size(); ++s) sum.add(g(std::log(p[s]), std::log(q[s])));
  return {sum.value(), 0.0};
}

}  // namespace

QuadratureResult integrate_pair(const AefFamily& fam, std::span<const double> theta_p,
                                std::span<const double> theta_q, const LogPairFn& g,
                                const PairPlan& plan) {
  fam.check_domain(theta_p);
  fam.check_domain(theta_q);
  switch (fam.kind()) {
    case FamilyKind::gaussian_iso:
      return gaussian_pair(theta_p, theta_q, g, plan);
    case FamilyKind::trunc_exp:
      return trunc_exp_pair(fam, theta_p, theta_q, g, plan);
    case FamilyKind::poisson:
      return poisson_pair(theta_p, theta_q, g, plan);
    case FamilyKind::categorical:
      return categorical_pair(fam, theta_p, theta_q, g);
    case FamilyKind::vmf:
      break;
  }
  throw InputError(fam.name() + " has no density evaluator for numerical integration");
}

double power_integrand(double lp, double lq, int i, double lambda, bool absolute) {
  if (lp == -std::numeric_limits<double>::infinity()) return 0.0;
  const double log_r = lq - lp;
  const double d = (lambda == 1.0) ? std::expm1(log_r) : std::exp(log_r) - lambda;
  if (d == 0.0) return 0.0;
  const double v = std::exp(lp + i * std::log(std::abs(d)));
  return (!absolute && d < 0.0 && i % 2 == 1) ? -v : v;
}

}  // namespace fchi::detail
