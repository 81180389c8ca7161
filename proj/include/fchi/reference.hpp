#pragma once

#include "fchi/chi.hpp"
#include "fchi/families.hpp"
#include "fchi/generators.hpp"
#include "fchi/quadrature.hpp"

#include <optional>
#include <span>

namespace fchi {

/// sum_s p_s f(q_s / p_s) with the conventions 0 f(0/0) = 0, f(0) taken as
/// the right limit, and 0 f(a/0) = a lim_{t->inf} f(t)/t. An infinite
/// contribution yields +infinity rather than an error.
double exact_f_divergence_discrete(const Generator& gen, const DiscreteDistribution& p,
                                   const DiscreteDistribution& q);

/// Closed-form alpha-divergence 4/(1-alpha^2) (1 - int p^((1-alpha)/2) q^((1+alpha)/2))
/// between members of one family. Throws DivergenceError when the
/// alpha-interpolate of the parameters leaves the parameter space.
double exact_alpha_aef(const AefFamily& fam, std::span<const double> theta_p,
                       std::span<const double> theta_q, double alpha);

/// int p f(q/p) by adaptive quadrature (gaussian_iso, trunc_exp) or
/// summation (poisson, categorical), with an error estimate. The Poisson
/// tail estimate assumes |f(u)| grows at most linearly.
QuadratureResult quadrature_f_divergence(const Generator& gen, const AefFamily& fam,
                                         std::span<const double> theta_p,
                                         std::span<const double> theta_q,
                                         std::optional<Domain> domain = std::nullopt);

}  // namespace fchi
