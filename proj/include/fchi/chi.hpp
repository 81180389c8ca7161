#pragma once

#include "fchi/errors.hpp"
#include "fchi/families.hpp"
#include "fchi/numeric.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fchi {

enum class ChiProvenance { discrete_exact, aef_closed_form, quadrature, file };

std::string to_string(ChiProvenance prov);

/// The values chi_2, ..., chi_K of one distribution pair.
class ChiBasis {
 public:
  /// values[0] holds chi_2. Needs at least one value.
  ChiBasis(std::vector<double> values, ChiProvenance provenance, std::string pair = {});

  int max_order() const { return static_cast<int>(values_.size()) + 1; }
  /// chi_i for 2 <= i <= max_order(); throws InputError otherwise.
  double operator[](int order) const;
  std::span<const double> values() const { return values_; }
  ChiProvenance provenance() const { return provenance_; }
  const std::string& pair() const { return pair_; }

 private:
  std::vector<double> values_;
  ChiProvenance provenance_;
  std::string pair_;
};

/// sum_s (q_s - lambda p_s)^i / p_s^(i-1). Atoms with p_s = q_s = 0 are
/// skipped; an atom with p_s = 0 < q_s makes the result +infinity.
double chi_pm_discrete(const DiscreteDistribution& p, const DiscreteDistribution& q, int i,
                       double lambda = 1.0);

/// The same sum carried out in the arithmetic of T (typically Rational).
/// Throws DivergenceError when some p_s = 0 < q_s.
template <class T>
T chi_pm_discrete_exact(std::span<const T> p, std::span<const T> q, int i, const T& lambda = T(1)) {
  if (p.size() != q.size()) throw InputError("distributions have different support sizes");
  if (i < 2) throw InputError("chi order must be >= 2");
  if (lambda == T(0)) throw InputError("lambda must be nonzero");
  T total(0);
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (p[s] == T(0)) {
      if (q[s] == T(0)) continue;
      throw DivergenceError("chi is infinite: an atom has p = 0 < q");
    }
    const T d = q[s] - lambda * p[s];
    T num(1);
    T den(1);
    for (int k = 0; k < i; ++k) num *= d;
    for (int k = 0; k < i - 1; ++k) den *= p[s];
    total += num / den;
  }
  return total;
}

/// Absolute chi sum_s |q_s - p_s|^s / p_s^(s-1).
double chi_abs(const DiscreteDistribution& p, const DiscreteDistribution& q, int s);

/// Closed form for an exponential family with parameters theta_p, theta_q.
/// Throws DivergenceError naming j when some interpolate
/// (1-j) theta_p + j theta_q leaves the parameter space, and OverflowError
/// when an odd-order value overflows (even orders saturate to +infinity).
double chi_pm_aef(const AefFamily& fam, std::span<const double> theta_p,
                  std::span<const double> theta_q, int i, double lambda = 1.0);

/// Closed form between a member and a mixture of the same family.
double chi_pm_mixture(const AefFamily& fam, std::span<const double> theta_p, const MixtureSpec& mix,
                      int i, double lambda = 1.0);

/// Integration interval for the continuous families. For gaussian_iso it is
/// measured along the unit vector from theta_p toward theta_q, starting at
/// theta_p; for trunc_exp it is in x and is clipped to the support.
struct Domain {
  double lo;
  double hi;
};

/// Numerical chi by adaptive quadrature (gaussian_iso, trunc_exp) or by
/// summation with a certified tail (poisson, categorical). vmf has no
/// density and is rejected.
double chi_pm_quadrature(const AefFamily& fam, std::span<const double> theta_p,
                         std::span<const double> theta_q, int i, double lambda = 1.0,
                         std::optional<Domain> domain = std::nullopt);

/// Absolute chi of two family members, by the same numerical routes.
double chi_abs(const AefFamily& fam, std::span<const double> theta_p,
               std::span<const double> theta_q, int s);

/// chi_3 between singly truncated exponentials with rates theta1 (p) and
/// theta2 (q); independent of the truncation point. Needs 3 theta2 > 2 theta1.
double chi_pm_trunc_exp_closed(double theta1, double theta2, int i = 3);

ChiBasis chi_basis_discrete(const DiscreteDistribution& p, const DiscreteDistribution& q, int k_max);
ChiBasis chi_basis_aef(const AefFamily& fam, std::span<const double> theta_p,
                       std::span<const double> theta_q, int k_max);
ChiBasis chi_basis_mixture(const AefFamily& fam, std::span<const double> theta_p,
                           const MixtureSpec& mix, int k_max);

/// CSV with header `order,chi_pm`, one row per order, 17 significant digits.
void write_basis_csv(std::ostream& out, const ChiBasis& basis);
/// Reads what write_basis_csv emits. A third column (provenance) is accepted
/// and ignored. Orders must run 2, 3, ... without gaps.
ChiBasis read_basis_csv(std::istream& in);

/// Decimal text with 17 significant digits, which reads back to the same
/// double; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

}  // namespace fchi
