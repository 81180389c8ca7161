#include "fchi/reference.hpp"

#include "fchi/errors.hpp"
#include "fchi/numeric.hpp"
#include "pair_integral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fchi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double exact_f_divergence_discrete(const Generator& gen, const DiscreteDistribution& p,
                                   const DiscreteDistribution& q) {
  if (p.size() != q.size()) throw InputError("distributions have different support sizes");
  CompensatedSum total;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (p[s] == 0.0) {
      if (q[s] == 0.0) continue;
      const double slope = gen.asymptotic_slope();
      if (std::isinf(slope)) return slope > 0 ? kInf : -kInf;
      total.add(q[s] * slope);
      continue;
    }
    const double v = p[s] * gen.eval(q[s] / p[s]);
    if (std::isinf(v)) return v;
    total.add(v);
  }
  return total.value();
}

double exact_alpha_aef(const AefFamily& fam, std::span<const double> theta_p, std::span<const double> theta_q,
                       double alpha) {
  if (!std::isfinite(alpha) || alpha == 1.0 || alpha == -1.0)
    throw InputError("alpha must be finite and different from +-1");
  const double wq = (1.0 + alpha) / 2.0;
  const double Fp = fam.log_normalizer(theta_p);
  const double Fq = fam.log_normalizer(theta_q);
  Param mid(theta_p.size());
  for (std::size_t k = 0; k < mid.size(); ++k) mid[k] = theta_p[k] + wq * (theta_q[k] - theta_p[k]);
  if (!fam.in_domain(mid))
    throw DivergenceError("alpha-divergence diverges: the interpolate (1-alpha)/2 theta_p + (1+alpha)/2 theta_q "
                          "leaves the parameter space");
  const double E = (fam.log_normalizer(mid) - Fp) - wq * (Fq - Fp);
  return 4.0 / (1.0 - alpha * alpha) * -std::expm1(E);
}

QuadratureResult quadrature_f_divergence(const Generator& gen, const AefFamily& fam,
                                         std::span<const double> theta_p, std::span<const double> theta_q,
                                         std::optional<Domain> domain) {
  detail::PairPlan plan;
  plan.domain = domain;
  fam.check_domain(theta_p);
  fam.check_domain(theta_q);
  if (fam.kind() == FamilyKind::trunc_exp) plan.decay = std::min(theta_p[0], theta_q[0]);
  if (fam.kind() == FamilyKind::poisson) {
    const double lam = std::max(std::exp(theta_p[0]), std::exp(theta_q[0]));
    plan.count_tail = [lam, &gen](long x, double lp, double lq) {
      // Geometric majorant of p + q beyond x, doubled for the growth of f.
      const double rho = 2.0 * lam / (static_cast<double>(x) + 2.0);
      if (rho >= 1.0) return kInf;
      const double mass = std::exp(lp) + std::exp(lq);
      double scale = 1.0;
      for (double v : {gen.limit_at_zero(), gen.asymptotic_slope()})
        if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
      return scale * mass * rho / (1.0 - rho);
    };
  }
  auto g = [&gen](double lp, double lq) {
    const double p = std::exp(lp);
    if (p == 0.0) return 0.0;
    return p * gen.eval(std::exp(lq - lp));
  };
  return detail::integrate_pair(fam, theta_p, theta_q, g, plan);
}

}  // namespace fchi
