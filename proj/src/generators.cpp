#include "fchi/generators.hpp"

#include "fchi/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fchi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Rational pow2(int e) {
  BigInt p = 1;
  p <<= e;
  return Rational(p);
}

Rational sign_pow(int i) { return (i % 2 == 0) ? Rational(1) : Rational(-1); }

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

double horner(std::span<const double> a, double u) {
  double r = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * u + *it;
  return r;
}

std::vector<double> derivative(std::span<const double> a) {
  std::vector<double> d;
  for (std::size_t j = 1; j < a.size(); ++j) d.push_back(a[j] * static_cast<double>(j));
  return d;
}

void trim(std::vector<double>& a) {
  while (!a.empty() && a.back() == 0.0) a.pop_back();
}

// Real roots of a polynomial inside [lo, hi]. Critical points (roots of the
// derivative) split the interval into monotone pieces, each holding at most
// one root, which bisection then isolates.
std::vector<double> roots_in(std::vector<double> a, double lo, double hi) {
  trim(a);
  if (a.size() <= 1) return {};
  if (a.size() == 2) {
    const double r = -a[0] / a[1];
    if (r >= lo && r <= hi) return {r};
    return {};
  }
  std::vector<double> knots{lo};
  for (double c : roots_in(derivative(a), lo, hi)) knots.push_back(c);
  knots.push_back(hi);
  std::vector<double> roots;
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    double left = knots[s];
    double right = knots[s + 1];
    double fl = horner(a, left);
    const double fr = horner(a, right);
    if (fl == 0.0) {
      roots.push_back(left);
      continue;
    }
    if ((fl < 0.0) == (fr < 0.0) || fr == 0.0) continue;
    for (int it = 0; it < 200 && right > left; ++it) {
      const double mid = 0.5 * (left + right);
      if (mid <= left || mid >= right) break;
      const double fm = horner(a, mid);
      if ((fm < 0.0) == (fl < 0.0)) {
        left = mid;
        fl = fm;
      } else {
        right = mid;
      }
    }
    roots.push_back(0.5 * (left + right));
  }
  if (horner(a, hi) == 0.0) roots.push_back(hi);
  return roots;
}

// sup |P| on [lo, hi]; the maximum of |P| sits at an endpoint or at a
// critical point of P.
double poly_sup_abs(std::vector<double> a, double lo, double hi) {
  trim(a);
  if (a.empty()) return 0.0;
  double best = std::max(std::abs(horner(a, lo)), std::abs(horner(a, hi)));
  for (double c : roots_in(derivative(a), lo, hi)) best = std::max(best, std::abs(horner(a, c)));
  return best;
}

// |f^(n)| of the monotone catalog derivatives, as a function of u.
double catalog_abs_derivative(GeneratorKind kind, int n, double u) {
  const double fact_nm2 = std::exp(log_factorial(n - 2));
  switch (kind) {
    case GeneratorKind::kl:
      return std::exp(log_factorial(n - 1) - n * std::log(u));
    case GeneratorKind::kl_reverse:
      return std::exp(log_factorial(n - 2) - (n - 1) * std::log(u));
    case GeneratorKind::jeffreys:
      return fact_nm2 * (u + n - 1) * std::exp(-n * std::log(u));
    case GeneratorKind::js:
      return fact_nm2 * (std::exp(-(n - 1) * std::log(u)) - std::exp(-(n - 1) * std::log1p(u)));
    case GeneratorKind::harmonic:
      return 2.0 * std::exp(log_factorial(n) - (n + 1) * std::log1p(u));
    default:
      break;
  }
  throw InputError("no closed-form derivative for this generator");
}

}  // namespace

void validate(const RatioBounds& rb) {
  if (!(rb.m >= 0.0) || !(rb.m <= 1.0) || !(rb.M >= 1.0))
    throw InputError("ratio bounds must satisfy 0 <= m <= 1 <= M");
}

Generator Generator::kl() { return Generator(GeneratorKind::kl, "kl"); }
Generator Generator::kl_reverse() { return Generator(GeneratorKind::kl_reverse, "rkl"); }
Generator Generator::jeffreys() { return Generator(GeneratorKind::jeffreys, "jeffreys"); }
Generator Generator::js() { return Generator(GeneratorKind::js, "js"); }
Generator Generator::harmonic() { return Generator(GeneratorKind::harmonic, "harmonic"); }
Generator Generator::exponential() { return Generator(GeneratorKind::exponential, "exp"); }

Generator Generator::alpha(double alpha) {
  if (!std::isfinite(alpha)) throw InputError("alpha must be finite");
  if (alpha == 1.0 || alpha == -1.0)
    throw InputError("alpha = +-1 has no alpha generator (KL limits); use kl or rkl");
  Generator g(GeneratorKind::alpha, "alpha:" + format_real(alpha));
  g.alpha_ = alpha;
  return g;
}

Generator Generator::polynomial(std::vector<Rational> a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  std::string name = "poly:";
  for (std::size_t j = 0; j < a.size(); ++j) name += (j ? "," : "") + to_string(a[j]);
  if (a.empty()) name += "0";
  Generator g(GeneratorKind::polynomial, std::move(name));
  for (const auto& aj : a) g.poly_double_.push_back(to_double(aj));
  g.poly_ = std::move(a);
  return g;
}

Generator Generator::parse(std::string_view spec) {
  if (spec == "kl") return kl();
  if (spec == "rkl") return kl_reverse();
  if (spec == "jeffreys") return jeffreys();
  if (spec == "js") return js();
  if (spec == "harmonic") return harmonic();
  if (spec == "exp") return exponential();
  if (spec.starts_with("alpha:")) {
    const std::string_view text = spec.substr(6);
    double a = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), a);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
      throw InputError("invalid alpha value in generator spec: " + std::string(spec));
    return alpha(a);
  }
  if (spec.starts_with("poly:")) {
    std::vector<Rational> a;
    std::string_view rest = spec.substr(5);
    while (true) {
      const auto comma = rest.find(',');
      a.push_back(parse_rational(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return polynomial(std::move(a));
  }
  throw InputError("unknown generator: " + std::string(spec));
}

Generator Generator::conjugate() const {
  if (kind_ == GeneratorKind::conjugate) {
    // (beta u h(1/u))^r = beta h
    Generator g = *base_;
    const bool unit = scale_ == 1.0 && exact_scale_ == Rational(1);
    g.scale_ *= scale_;
    if (g.exact_scale_ && exact_scale_) {
      g.exact_scale_ = *g.exact_scale_ * *exact_scale_;
    } else {
      g.exact_scale_.reset();
    }
    if (!unit) g.name_ = (exact_scale_ ? to_string(*exact_scale_) : format_real(scale_)) + "*" + g.name_;
    return g;
  }
  Generator g(GeneratorKind::conjugate, "conj(" + name_ + ")");
  g.base_ = std::make_shared<const Generator>(*this);
  return g;
}

Generator Generator::scaled(const Rational& beta) const {
  if (beta <= 0) throw InputError("generator scale must be positive");
  Generator g = *this;
  g.scale_ = scale_ * to_double(beta);
  if (g.exact_scale_) g.exact_scale_ = *g.exact_scale_ * beta;
  g.name_ = to_string(beta) + "*" + name_;
  return g;
}

Generator Generator::scaled(double beta) const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("generator scale must be positive");
  Generator g = *this;
  g.scale_ = scale_ * beta;
  g.exact_scale_.reset();
  g.name_ = format_real(beta) + "*" + name_;
  return g;
}

Generator Generator::standardized() const {
  if (has_exact_coeffs()) {
    const Rational c2 = exact_coeff(2);
    if (c2 <= 0) throw InputError("generator is not strictly convex at 1");
    return scaled(Rational(1) / (2 * c2));
  }
  const double c2 = coeff(2);
  if (!(c2 > 0.0)) throw InputError("generator is not strictly convex at 1");
  return scaled(0.5 / c2);
}

std::optional<Rational> Generator::exact_gamma() const {
  if (kind_ != GeneratorKind::alpha) return std::nullopt;
  const double g = gamma();
  if (g != std::floor(g) || std::abs(g) > 1e15) return std::nullopt;
  return Rational(static_cast<long long>(g));
}

bool Generator::exact_unscaled() const {
  switch (kind_) {
    case GeneratorKind::exponential:
      return false;
    case GeneratorKind::alpha:
      return exact_gamma().has_value();
    case GeneratorKind::conjugate:
      return base_->has_exact_coeffs();
    default:
      return true;
  }
}

bool Generator::has_exact_coeffs() const { return exact_scale_.has_value() && exact_unscaled(); }

Rational Generator::exact_taylor_unscaled(int i) const {
  switch (kind_) {
    case GeneratorKind::kl:
      if (i == 0) return 0;
      return sign_pow(i) / i;
    case GeneratorKind::kl_reverse:
      if (i == 0) return 0;
      if (i == 1) return 1;
      return sign_pow(i) / (i * (i - 1));
    case GeneratorKind::jeffreys:
      if (i < 2) return 0;
      return sign_pow(i) / (i - 1);
    case GeneratorKind::js:
      if (i < 2) return 0;
      return sign_pow(i) * (1 - Rational(1) / pow2(i - 1)) / (i * (i - 1));
    case GeneratorKind::harmonic:
      if (i == 0) return 1;
      return -sign_pow(i) / pow2(i);
    case GeneratorKind::polynomial: {
      Rational c = 0;
      for (std::size_t j = static_cast<std::size_t>(i); j < poly_.size(); ++j)
        c += poly_[j] * Rational(binomial_exact(static_cast<int>(j), i));
      return c;
    }
    case GeneratorKind::alpha: {
      const Rational a(static_cast<long long>(alpha_));
      const Rational k = Rational(4) / (1 - a * a);
      if (i == 0) return 0;
      return -k * generalized_binomial(*exact_gamma(), i);
    }
    case GeneratorKind::conjugate: {
      const auto base = base_->exact_taylor_coeffs(i);
      return conjugate_taylor<Rational>(base)[i];
    }
    case GeneratorKind::exponential:
      break;
  }
  throw InputError("generator " + name_ + " has no exact coefficients");
}

Rational Generator::exact_coeff(int i) const {
  if (i < 0) throw InputError("coefficient order must be nonnegative");
  if (!has_exact_coeffs()) throw InputError("generator " + name_ + " has no exact coefficients");
  return *exact_scale_ * exact_taylor_unscaled(i);
}

std::vector<Rational> Generator::exact_taylor_coeffs(int k_max) const {
  std::vector<Rational> c;
  if (!has_exact_coeffs()) throw InputError("generator " + name_ + " has no exact coefficients");
  if (kind_ == GeneratorKind::conjugate) {
    auto base = base_->exact_taylor_coeffs(k_max);
    c = conjugate_taylor<Rational>(base);
    for (auto& ci : c) ci *= *exact_scale_;
    return c;
  }
  for (int i = 0; i <= k_max; ++i) c.push_back(exact_coeff(i));
  return c;
}

double Generator::taylor_unscaled(int i) const {
  if (exact_unscaled()) return to_double(exact_taylor_unscaled(i));
  switch (kind_) {
    case GeneratorKind::exponential: {
      if (i < 2) return 0.0;
      double c = std::numbers::e / 2.0;
      for (int j = 3; j <= i; ++j) c /= j;
      return c;
    }
    case GeneratorKind::alpha:
      if (i == 0) return 0.0;
      return -alpha_scale() * generalized_binomial(gamma(), i);
    case GeneratorKind::conjugate: {
      const auto base = base_->taylor_coeffs(i);
      return conjugate_taylor<double>(base)[i];
    }
    default:
      break;
  }
  throw InputError("unreachable generator kind");
}

double Generator::taylor(int i) const {
  if (has_exact_coeffs()) return to_double(exact_coeff(i));
  return scale_ * taylor_unscaled(i);
}

double Generator::coeff(int i) const {
  if (i < 2) throw InputError("expansion coefficients start at order 2");
  return taylor(i);
}

std::vector<double> Generator::taylor_coeffs(int k_max) const {
  std::vector<double> c;
  if (k_max < 0) return c;
  if (has_exact_coeffs()) {
    for (const auto& r : exact_taylor_coeffs(k_max)) c.push_back(to_double(r));
    return c;
  }
  if (kind_ == GeneratorKind::conjugate) {
    c = conjugate_taylor<double>(base_->taylor_coeffs(k_max));
    for (auto& ci : c) ci *= scale_;
    return c;
  }
  for (int i = 0; i <= k_max; ++i) c.push_back(taylor(i));
  return c;
}

std::vector<double> Generator::coeffs(int k_max) const {
  if (k_max < 2) return {};
  auto full = taylor_coeffs(k_max);
  return std::vector<double>(full.begin() + 2, full.end());
}

double Generator::eval_unscaled(double u) const {
  switch (kind_) {
    case GeneratorKind::kl:
      return u == 0.0 ? kInf : -std::log(u);
    case GeneratorKind::kl_reverse:
      return u == 0.0 ? 0.0 : u * std::log(u);
    case GeneratorKind::jeffreys:
      return u == 0.0 ? kInf : (u - 1.0) * std::log(u);
    case GeneratorKind::js:
      if (u == 0.0) return std::numbers::ln2;
      return -(u + 1.0) * std::log((1.0 + u) / 2.0) + u * std::log(u);
    case GeneratorKind::harmonic:
      return 2.0 * u / (u + 1.0);
    case GeneratorKind::exponential:
      return std::exp(u) - std::numbers::e * u;
    case GeneratorKind::alpha:
      return -alpha_scale() * std::expm1(gamma() * std::log(u));
    case GeneratorKind::polynomial:
      return horner(poly_double_, u);
    case GeneratorKind::conjugate:
      if (u == 0.0) return base_->asymptotic_slope();
      if (std::isinf(u)) return u * base_->limit_at_zero();
      return u * base_->eval(1.0 / u);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double Generator::eval(double u) const {
  if (!(u >= 0.0)) throw InputError("generators are defined on u >= 0");
  return scale_ * eval_unscaled(u);
}

double Generator::slope_unscaled() const {
  switch (kind_) {
    case GeneratorKind::kl:
    case GeneratorKind::harmonic:
      return 0.0;
    case GeneratorKind::kl_reverse:
    case GeneratorKind::jeffreys:
    case GeneratorKind::exponential:
      return kInf;
    case GeneratorKind::js:
      return std::numbers::ln2;
    case GeneratorKind::alpha:
      // k (1/u - u^(gamma - 1)): vanishes for gamma < 1, otherwise -k * inf.
      if (gamma() < 1.0) return 0.0;
      return alpha_scale() < 0.0 ? kInf : -kInf;
    case GeneratorKind::polynomial:
      if (poly_.size() <= 1) return 0.0;
      if (poly_.size() == 2) return poly_double_[1];
      return poly_.back() > 0 ? kInf : -kInf;
    case GeneratorKind::conjugate:
      return base_->limit_at_zero();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double Generator::asymptotic_slope() const { return scale_ * slope_unscaled(); }

Bound Generator::deriv_sup_unscaled(int n, double m, double M) const {
  switch (kind_) {
    case GeneratorKind::kl:
    case GeneratorKind::kl_reverse:
    case GeneratorKind::jeffreys:
    case GeneratorKind::js:
      // |f^(n)| decreases on (0, inf) and diverges at 0.
      if (m == 0.0) return Bound::unbounded();
      return Bound::finite(catalog_abs_derivative(kind_, n, m));
    case GeneratorKind::harmonic:
      return Bound::finite(catalog_abs_derivative(kind_, n, m));
    case GeneratorKind::exponential:
      if (std::isinf(M)) return Bound::unbounded();
      return Bound::finite(std::exp(M));
    case GeneratorKind::alpha: {
      // |f^(n)(u)| = |k| |falling(gamma, n)| u^(gamma - n): a power of u.
      const double lead = std::abs(alpha_scale() * generalized_binomial(gamma(), n) *
                                   std::exp(log_factorial(n)));
      if (lead == 0.0) return Bound::finite(0.0);
      const double power = gamma() - n;
      if (power == 0.0) return Bound::finite(lead);
      const double at = power < 0.0 ? m : M;
      if (at == 0.0 || std::isinf(at)) return Bound::unbounded();
      return Bound::finite(lead * std::pow(at, power));
    }
    case GeneratorKind::polynomial: {
      std::vector<double> d = poly_double_;
      for (int j = 0; j < n; ++j) d = derivative(d);
      trim(d);
      if (d.empty()) return Bound::finite(0.0);
      if (std::isinf(M)) return d.size() == 1 ? Bound::finite(std::abs(d[0])) : Bound::unbounded();
      return Bound::finite(poly_sup_abs(d, m, M));
    }
    case GeneratorKind::conjugate:
      // No closed form for the derivatives of u f(1/u) in general; report
      // the absence of a certificate.
      return Bound::unbounded();
  }
  return Bound::unbounded();
}

Bound Generator::deriv_sup(int k, double m, double M) const {
  if (k < 1) throw InputError("deriv_sup needs k >= 1");
  if (!(m >= 0.0) || m > 1.0 || !(M >= 1.0) || m > M)
    throw InputError("deriv_sup needs 0 <= m <= 1 <= M");
  const Bound b = deriv_sup_unscaled(k + 1, m, M);
  if (!b.bounded()) return b;
  return Bound::finite(scale_ * b.value());
}

std::vector<double> conjugate_coeffs(const Generator& gen, int k_max) {
  return gen.conjugate().coeffs(k_max);
}

std::vector<Rational> exact_conjugate_coeffs(const Generator& gen, int k_max) {
  if (k_max < 2) return {};
  auto full = gen.conjugate().exact_taylor_coeffs(k_max);
  return std::vector<Rational>(full.begin() + 2, full.end());
}

std::vector<Generator> catalog() {
  return {Generator::kl(),       Generator::kl_reverse(),  Generator::jeffreys(),
          Generator::js(),       Generator::harmonic(),    Generator::exponential(),
          Generator::alpha(0.5), Generator::polynomial({1, -2, 1})};
}

}  // namespace fchi
