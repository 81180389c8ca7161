#pragma once

#include "fchi/bounds.hpp"
#include "fchi/numeric.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fchi {

enum class GeneratorKind {
  kl,           // -log u
  kl_reverse,   // u log u
  jeffreys,     // (u - 1) log u
  js,           // -(u + 1) log((1 + u) / 2) + u log u
  harmonic,     // 2u / (u + 1)
  exponential,  // e^u - e u
  alpha,        // 4 / (1 - a^2) (1 - u^((1 + a) / 2))
  polynomial,   // sum_j a_j u^j
  conjugate,    // u f(1/u)
};

/// An f-divergence generator together with its Taylor data at u = 1.
///
/// Coefficients are c_i = f^(i)(1) / i!. They are exact rationals for the
/// logarithmic catalog entries, the harmonic and polynomial generators, and
/// alpha generators whose exponent (1 + alpha) / 2 is an integer; the
/// exponential and general alpha generators fall back to floating point.
///
/// Generators are immutable values and safe to share between threads.
class Generator {
 public:
  static Generator kl();
  static Generator kl_reverse();
  static Generator jeffreys();
  static Generator js();
  static Generator harmonic();
  static Generator exponential();
  /// Throws InputError for alpha = +-1 (the KL limits) or non-finite alpha.
  static Generator alpha(double alpha);
  /// f(u) = sum_j a[j] u^j. Trailing zero coefficients are dropped.
  static Generator polynomial(std::vector<Rational> a);

  /// Parses `kl`, `rkl`, `jeffreys`, `js`, `harmonic`, `exp`, `alpha:<real>`
  /// or `poly:<a0>,<a1>,...,<ad>`.
  static Generator parse(std::string_view spec);

  /// The generator u f(1/u) of the reverse divergence I_f(q:p).
  Generator conjugate() const;
  /// beta * f for beta > 0.
  Generator scaled(const Rational& beta) const;
  Generator scaled(double beta) const;
  /// Rescaled so that f''(1) = 1, i.e. c_2 = 1/2.
  Generator standardized() const;

  GeneratorKind kind() const { return kind_; }
  /// Spec-string spelling, e.g. "alpha:3" or "conj(kl)".
  const std::string& name() const { return name_; }
  /// The alpha parameter of an alpha generator.
  double alpha_value() const { return alpha_; }
  /// Coefficients a_0..a_d of a polynomial generator.
  const std::vector<Rational>& polynomial_coefficients() const { return poly_; }

  /// f(u) for u >= 0; f(0) is the right limit at zero.
  double eval(double u) const;
  double f_at_one() const { return taylor(0); }
  double slope_at_one() const { return taylor(1); }
  double limit_at_zero() const { return eval(0.0); }
  /// lim_{u -> inf} f(u) / u, which fixes the convention 0 f(a/0) = a * slope.
  double asymptotic_slope() const;

  bool has_exact_coeffs() const;
  /// Exact c_i for i >= 0. Throws InputError when the coefficients are not
  /// rational (see has_exact_coeffs()).
  Rational exact_coeff(int i) const;
  /// c_i for i >= 2.
  double coeff(int i) const;
  /// c_2..c_{k_max}; element i - 2 holds c_i.
  std::vector<double> coeffs(int k_max) const;
  /// Taylor coefficients c_0..c_{k_max} including f(1) and f'(1).
  std::vector<double> taylor_coeffs(int k_max) const;
  std::vector<Rational> exact_taylor_coeffs(int k_max) const;

  /// sup |f^(k+1)(u)| over [m, M]; requires 0 <= m <= 1 <= M (M may be +inf).
  Bound deriv_sup(int k, double m, double M) const;

 private:
  Generator(GeneratorKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  double taylor(int i) const;
  double taylor_unscaled(int i) const;
  Rational exact_taylor_unscaled(int i) const;
  bool exact_unscaled() const;
  double eval_unscaled(double u) const;
  double slope_unscaled() const;
  Bound deriv_sup_unscaled(int n, double m, double M) const;
  double alpha_scale() const { return 4.0 / (1.0 - alpha_ * alpha_); }
  double gamma() const { return (1.0 + alpha_) / 2.0; }
  std::optional<Rational> exact_gamma() const;

  GeneratorKind kind_;
  std::string name_;
  double alpha_ = 0.0;
  std::vector<Rational> poly_;
  std::vector<double> poly_double_;
  std::shared_ptr<const Generator> base_;
  double scale_ = 1.0;
  std::optional<Rational> exact_scale_ = Rational(1);
};

/// Taylor data of u f(1/u) at 1 from the Taylor data c_0..c_K of f at 1.
///
/// With h(u) = f(1/u), (f^r)^(i)(1) = h^(i)(1) + i h^(i-1)(1), and the
/// derivatives of h come from Faa di Bruno's formula with inner function
/// g(u) = 1/u, g^(j)(1) = (-1)^j j!. In normalized form
/// [t^n] h(1 + t) = sum_m c_m B_{n,m}, where the partial Bell polynomial
/// B_{n,m} sums the partitions of n into m parts; it is built by the
/// recurrence B_{n,m} = sum_j g_j B_{n-j,m-1} with g_j = (-1)^j, which keeps
/// the cost at O(K^3) instead of one term per partition.
template <class T>
std::vector<T> conjugate_taylor(std::span<const T> c) {
  const int k_max = static_cast<int>(c.size()) - 1;
  std::vector<T> r(c.size(), T(0));
  if (k_max < 0) return r;
  // bell[n][m], n, m = 0..k_max
  std::vector<std::vector<T>> bell(k_max + 1, std::vector<T>(k_max + 1, T(0)));
  bell[0][0] = T(1);
  for (int m = 1; m <= k_max; ++m)
    for (int n = m; n <= k_max; ++n) {
      T acc(0);
      for (int j = 1; j <= n - m + 1; ++j) {
        if (j % 2 == 0) {
          acc += bell[n - j][m - 1];
        } else {
          acc -= bell[n - j][m - 1];
        }
      }
      bell[n][m] = acc;
    }
  std::vector<T> h(c.size(), T(0));
  for (int n = 0; n <= k_max; ++n)
    for (int m = 0; m <= n; ++m) h[n] += c[m] * bell[n][m];
  r[0] = h[0];
  for (int n = 1; n <= k_max; ++n) r[n] = h[n] + h[n - 1];
  return r;
}

/// Coefficients c^r_2..c^r_{k_max} of the conjugate generator.
std::vector<double> conjugate_coeffs(const Generator& gen, int k_max);
/// Exact variant; requires gen.has_exact_coeffs().
std::vector<Rational> exact_conjugate_coeffs(const Generator& gen, int k_max);

/// The eight catalog generators used throughout the examples:
/// kl, rkl, jeffreys, js, harmonic, exp, alpha:0.5 and poly:1,-2,1.
std::vector<Generator> catalog();

}  // namespace fchi
