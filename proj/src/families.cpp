#include "fchi/families.hpp"

#include "fchi/errors.hpp"
#include "fchi/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fchi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSumTolerance = 1e-12;

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// log(1 + sum_i exp(theta_i)) without overflow.
double log1p_sum_exp(std::span<const double> theta) {
  double top = 0.0;
  for (double t : theta) top = std::max(top, t);
  double s = std::exp(-top);
  for (double t : theta) s += std::exp(t - top);
  return top + std::log(s);
}

RatioBounds from_log_extrema(double lo, double hi) {
  return RatioBounds{std::exp(lo), std::exp(hi)};
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InputError("a discrete distribution needs at least one atom");
  CompensatedSum total;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("probabilities must be finite and >= 0");
    total.add(p);
  }
  if (std::abs(total.value() - 1.0) > kSumTolerance)
    throw InputError("probabilities must sum to 1 (within 1e-12)");
}

DiscreteDistribution DiscreteDistribution::bernoulli(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("Bernoulli parameter must lie in [0, 1]");
  return DiscreteDistribution({lambda, 1.0 - lambda});
}

RatioBounds density_ratio_bounds(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  if (p.size() != q.size()) throw InputError("distributions have different support sizes");
  double m = kInf;
  double M = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (p[s] == 0.0) {
      if (q[s] > 0.0) M = kInf;
      continue;
    }
    const double r = q[s] / p[s];
    m = std::min(m, r);
    M = std::max(M, r);
  }
  return RatioBounds{m, M};
}

AefFamily AefFamily::gaussian_iso(int d) {
  if (d < 1) throw InputError("gaussian_iso needs d >= 1");
  return AefFamily(FamilyKind::gaussian_iso, d);
}

AefFamily AefFamily::poisson() { return AefFamily(FamilyKind::poisson, 1); }

AefFamily AefFamily::categorical(int d) {
  if (d < 1) throw InputError("categorical needs d >= 1");
  return AefFamily(FamilyKind::categorical, d);
}

AefFamily AefFamily::vmf(int d) {
  if (d < 2) throw InputError("vmf needs d >= 2");
  AefFamily f(FamilyKind::vmf, d);
  f.sphere_dim_ = d;
  return f;
}

AefFamily AefFamily::trunc_exp(double a, std::optional<double> b) {
  if (!std::isfinite(a)) throw InputError("trunc_exp needs a finite left end point");
  if (b && (!std::isfinite(*b) || *b <= a)) throw InputError("trunc_exp needs a < b");
  AefFamily f(FamilyKind::trunc_exp, 1);
  f.a_ = a;
  f.b_ = b;
  return f;
}

std::string AefFamily::name() const {
  switch (kind_) {
    case FamilyKind::gaussian_iso:
      return "gaussian_iso";
    case FamilyKind::poisson:
      return "poisson";
    case FamilyKind::categorical:
      return "categorical";
    case FamilyKind::vmf:
      return "vmf";
    case FamilyKind::trunc_exp:
      return "trunc_exp";
  }
  return "?";
}

bool AefFamily::is_affine() const { return !(kind_ == FamilyKind::trunc_exp && !b_); }

void AefFamily::check_dim(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != dim_)
    throw InputError(name() + " expects a natural parameter of dimension " + std::to_string(dim_) +
                     ", got " + std::to_string(theta.size()));
}

bool AefFamily::in_domain(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != dim_) return false;
  for (double t : theta)
    if (!std::isfinite(t)) return false;
  if (kind_ == FamilyKind::trunc_exp && !b_) return theta[0] > 0.0;
  return true;
}

void AefFamily::check_domain(std::span<const double> theta) const {
  check_dim(theta);
  if (!in_domain(theta)) {
    if (kind_ == FamilyKind::trunc_exp)
      throw DomainError("trunc_exp with b = inf needs theta > 0, got " + std::to_string(theta[0]));
    throw DomainError(name() + " natural parameter must be finite");
  }
}

double AefFamily::log_normalizer(std::span<const double> theta) const {
  check_domain(theta);
  switch (kind_) {
    case FamilyKind::gaussian_iso:
      return 0.5 * squared_norm(theta);
    case FamilyKind::poisson:
      return std::exp(theta[0]);
    case FamilyKind::categorical:
      return log1p_sum_exp(theta);
    case FamilyKind::vmf:
      return log_hypergeometric_0f1(sphere_dim_ / 2.0, squared_norm(theta) / 4.0);
    case FamilyKind::trunc_exp: {
      const double t = theta[0];
      if (!b_) return -a_ * t - std::log(t);
      // log((e^(-a t) - e^(-b t)) / t) = -a t + log((1 - e^(-w t)) / t)
      const double w = *b_ - a_;
      if (t == 0.0) return std::log(w);
      if (t > 0.0) return -a_ * t + std::log(-std::expm1(-w * t)) - std::log(t);
      const double x = -w * t;
      return -a_ * t + x + std::log(-std::expm1(-x)) - std::log(-t);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Param AefFamily::natural_param(std::span<const double> source) const {
  switch (kind_) {
    case FamilyKind::poisson:
      if (source.size() != 1 || !(source[0] > 0.0) || !std::isfinite(source[0]))
        throw InputError("poisson rate must be a single positive number");
      return {std::log(source[0])};
    case FamilyKind::categorical: {
      if (static_cast<int>(source.size()) != dim_ + 1)
        throw InputError("categorical expects " + std::to_string(dim_ + 1) + " probabilities");
      DiscreteDistribution p(std::vector<double>(source.begin(), source.end()));
      for (double ps : source)
        if (ps == 0.0) throw InputError("categorical log-odds undefined for a zero probability");
      Param theta;
      for (std::size_t i = 1; i < source.size(); ++i) theta.push_back(std::log(source[i] / source[0]));
      return theta;
    }
    case FamilyKind::gaussian_iso:
    case FamilyKind::vmf:
    case FamilyKind::trunc_exp: {
      Param theta(source.begin(), source.end());
      check_domain(theta);
      return theta;
    }
  }
  return {};
}

Param AefFamily::source_param(std::span<const double> theta) const {
  check_domain(theta);
  switch (kind_) {
    case FamilyKind::poisson:
      return {std::exp(theta[0])};
    case FamilyKind::categorical: {
      const auto dist = categorical_probs(theta);
      return Param(dist.probs().begin(), dist.probs().end());
    }
    default:
      return Param(theta.begin(), theta.end());
  }
}

double AefFamily::log_density(std::span<const double> x, std::span<const double> theta) const {
  if (!has_density()) throw InputError(name() + " carries no density evaluator");
  const double F = log_normalizer(theta);
  switch (kind_) {
    case FamilyKind::gaussian_iso: {
      if (static_cast<int>(x.size()) != dim_) throw InputError("sample dimension mismatch");
      double dot = 0.0;
      for (int i = 0; i < dim_; ++i) dot += x[i] * theta[i];
      return dot - F - 0.5 * squared_norm(x) - 0.5 * dim_ * std::log(2.0 * std::numbers::pi);
    }
    case FamilyKind::poisson: {
      if (x.size() != 1) throw InputError("poisson samples are scalar counts");
      const double k = x[0];
      if (k < 0.0 || k != std::floor(k)) return -kInf;
      return k * theta[0] - F - std::lgamma(k + 1.0);
    }
    case FamilyKind::categorical: {
      if (static_cast<int>(x.size()) != dim_) throw InputError("sample dimension mismatch");
      double dot = 0.0;
      int ones = 0;
      for (int i = 0; i < dim_; ++i) {
        if (x[i] != 0.0 && x[i] != 1.0) return -kInf;
        ones += x[i] == 1.0;
        dot += x[i] * theta[i];
      }
      if (ones > 1) return -kInf;
      return dot - F;
    }
    case FamilyKind::trunc_exp: {
      if (x.size() != 1) throw InputError("trunc_exp samples are scalar");
      if (x[0] < a_ || (b_ && x[0] > *b_)) return -kInf;
      return -theta[0] * x[0] - F;
    }
    case FamilyKind::vmf:
      break;
  }
  return -kInf;
}

double AefFamily::density(std::span<const double> x, std::span<const double> theta) const {
  return std::exp(log_density(x, theta));
}

DiscreteDistribution AefFamily::categorical_probs(std::span<const double> theta) const {
  if (kind_ != FamilyKind::categorical) throw InputError("categorical_probs needs a categorical family");
  check_domain(theta);
  const double F = log_normalizer(theta);
  std::vector<double> p{std::exp(-F)};
  for (double t : theta) p.push_back(std::exp(t - F));
  // Renormalize away the last-ulp drift of exp/log.
  CompensatedSum total;
  for (double v : p) total.add(v);
  for (double& v : p) v /= total.value();
  return DiscreteDistribution(std::move(p));
}

RatioBounds AefFamily::density_ratio_bounds(std::span<const double> theta_p,
                                            std::span<const double> theta_q) const {
  check_domain(theta_p);
  check_domain(theta_q);
  if (std::equal(theta_p.begin(), theta_p.end(), theta_q.begin(), theta_q.end()))
    return RatioBounds{1.0, 1.0};
  const double Fp = log_normalizer(theta_p);
  const double Fq = log_normalizer(theta_q);
  switch (kind_) {
    case FamilyKind::gaussian_iso:
      return RatioBounds{0.0, kInf};
    case FamilyKind::poisson:
      // log q/p = x (theta_q - theta_p) - e^theta_q + e^theta_p
      if (theta_q[0] < theta_p[0]) return RatioBounds{0.0, std::exp(Fp - Fq)};
      return RatioBounds{0.0, kInf};
    case FamilyKind::categorical:
      return fchi::density_ratio_bounds(categorical_probs(theta_p), categorical_probs(theta_q));
    case FamilyKind::vmf: {
      // x.(theta_q - theta_p) ranges over [-|delta|, |delta|] on the sphere.
      double d2 = 0.0;
      for (int i = 0; i < dim_; ++i) d2 += (theta_q[i] - theta_p[i]) * (theta_q[i] - theta_p[i]);
      const double delta = std::sqrt(d2);
      return from_log_extrema(-delta - Fq + Fp, delta - Fq + Fp);
    }
    case FamilyKind::trunc_exp: {
      // log q/p = -(theta_q - theta_p) x - F(theta_q) + F(theta_p), monotone in x.
      const double slope = -(theta_q[0] - theta_p[0]);
      const double at_a = slope * a_ - Fq + Fp;
      if (b_) {
        const double at_b = slope * *b_ - Fq + Fp;
        return from_log_extrema(std::min(at_a, at_b), std::max(at_a, at_b));
      }
      if (slope < 0.0) return RatioBounds{0.0, std::exp(at_a)};
      return RatioBounds{std::exp(at_a), kInf};
    }
  }
  return RatioBounds{0.0, kInf};
}

void MixtureSpec::validate(const AefFamily& fam) const {
  if (weights.empty() || weights.size() != thetas.size())
    throw InputError("mixture needs one weight per component");
  CompensatedSum total;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("mixture weights must be positive");
    total.add(w);
  }
  if (std::abs(total.value() - 1.0) > kSumTolerance)
    throw InputError("mixture weights must sum to 1 (within 1e-12)");
  for (const auto& theta : thetas) fam.check_domain(theta);
}

double log_hypergeometric_0f1(double b, double z) {
  if (!(b > 0.0)) throw InputError("0F1 needs b > 0");
  if (!(z >= 0.0)) throw InputError("0F1 series evaluated for z >= 0 only");
  constexpr int kMaxTerms = 10000;
  constexpr double kRescale = 1e280;
  double log_scale = 0.0;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    term *= z / ((b + n) * (n + 1));
    sum += term;
    if (sum > kRescale) {
      log_scale += std::log(sum);
      term /= sum;
      sum = 1.0;
    }
    // Past the peak of the terms, stop once they are negligible.
    if (n + 1 > z && term < 1e-16 * sum) break;
  }
  return log_scale + std::log(sum);
}

}  // namespace fchi
