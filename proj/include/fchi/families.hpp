#pragma once

#include "fchi/bounds.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fchi {

/// Natural parameter of an exponential family member.
using Param = std::vector<double>;

/// A finite probability vector over S atoms.
class DiscreteDistribution {
 public:
  /// Throws InputError unless every entry is >= 0 and the entries sum to 1
  /// within 1e-12.
  explicit DiscreteDistribution(std::vector<double> probs);
  static DiscreteDistribution bernoulli(double lambda);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t s) const { return probs_[s]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// min/max of q_s / p_s over the atoms. An atom with p_s = 0 < q_s makes the
/// ratio unbounded; atoms with p_s = q_s = 0 are ignored.
RatioBounds density_ratio_bounds(const DiscreteDistribution& p, const DiscreteDistribution& q);

enum class FamilyKind { gaussian_iso, poisson, categorical, vmf, trunc_exp };

/// An exponential family p(x; theta) = exp(t(x).theta - F(theta) + k(x)).
///
/// All families except the singly truncated exponential have an affine
/// natural parameter space (every real vector of dimension D is admissible),
/// which is what makes the power chi closed forms available.
class AefFamily {
 public:
  /// Unit-covariance Gaussians on R^d; theta is the mean.
  static AefFamily gaussian_iso(int d);
  /// theta = log(lambda).
  static AefFamily poisson();
  /// d + 1 outcomes; theta_i = log(p_i / p_0) for i = 1..d.
  static AefFamily categorical(int d);
  /// von Mises-Fisher on the unit sphere of R^d, relative to the normalized
  /// uniform surface measure; F(theta) = log 0F1(; d/2; |theta|^2 / 4).
  static AefFamily vmf(int d);
  /// Exponential densities theta e^(-theta x) truncated to [a, b];
  /// b = nullopt means +infinity, which restricts theta to (0, inf).
  static AefFamily trunc_exp(double a, std::optional<double> b);

  FamilyKind kind() const { return kind_; }
  std::string name() const;
  /// Natural parameter dimension D.
  int dim() const { return dim_; }
  bool is_affine() const;
  double trunc_a() const { return a_; }
  std::optional<double> trunc_b() const { return b_; }

  bool in_domain(std::span<const double> theta) const;
  /// Throws DomainError when theta is outside the natural parameter space.
  void check_domain(std::span<const double> theta) const;
  double log_normalizer(std::span<const double> theta) const;

  /// Usual parameter -> natural parameter: lambda (poisson), the full
  /// probability vector p_0..p_d (categorical), the mean (gaussian_iso),
  /// the rate (trunc_exp), or theta itself (vmf).
  Param natural_param(std::span<const double> source) const;
  Param source_param(std::span<const double> theta) const;

  bool has_density() const { return kind_ != FamilyKind::vmf; }
  /// log density at x against the family's base measure. Sample points are
  /// vectors in R^d (gaussian_iso), {x} with x a count (poisson), the d
  /// indicator coordinates x_1..x_d (categorical; all zero for outcome 0),
  /// or {x} (trunc_exp). Outside the support the result is -infinity.
  double log_density(std::span<const double> x, std::span<const double> theta) const;
  double density(std::span<const double> x, std::span<const double> theta) const;

  /// Probability vector p_0..p_d of a categorical member.
  DiscreteDistribution categorical_probs(std::span<const double> theta) const;

  /// Extrema of q/p over the support for p = f(.; theta_p), q = f(.; theta_q).
  /// M = +infinity reports an unbounded ratio.
  RatioBounds density_ratio_bounds(std::span<const double> theta_p,
                                   std::span<const double> theta_q) const;

 private:
  AefFamily(FamilyKind kind, int dim) : kind_(kind), dim_(dim) {}
  void check_dim(std::span<const double> theta) const;

  FamilyKind kind_;
  int dim_;
  int sphere_dim_ = 0;
  double a_ = 0.0;
  std::optional<double> b_;
};

/// Mixture sum_u w_u f(.; theta_u) of members of one family.
struct MixtureSpec {
  std::vector<double> weights;
  std::vector<Param> thetas;

  /// Throws InputError unless the weights are positive and sum to 1 within
  /// 1e-12 and every theta_u lies in the family's parameter space.
  void validate(const AefFamily& fam) const;
};

/// log 0F1(; b; z) for z >= 0 by term-wise summation, stopping once a term
/// falls below 1e-16 of the running sum (at most 10000 terms).
double log_hypergeometric_0f1(double b, double z);

}  // namespace fchi
