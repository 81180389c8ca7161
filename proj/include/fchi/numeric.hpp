#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fchi {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "3", "-2", "0.125", "1e-3" or "7/12" into an exact rational.
Rational parse_rational(std::string_view text);

/// "num/den", or just "num" for integers.
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Neumaier's variant of Kahan summation. Non-finite addends bypass the
/// compensation so that a single infinity yields an infinite sum, not NaN.
class CompensatedSum {
 public:
  void add(double x) {
    if (!std::isfinite(x) || !std::isfinite(sum_)) {
      sum_ += x;
      return;
    }
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return std::isfinite(sum_) ? sum_ + comp_ : sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Compensated sum after ordering the addends by increasing magnitude.
double sorted_compensated_sum(std::vector<double> terms);

/// Binomial coefficient C(n, k) as a double, read from a Pascal triangle
/// (exact for n <= 56). Zero when k < 0 or k > n.
double binomial(int n, int k);

/// Exact binomial coefficient from a 64-bit Pascal triangle, n <= 67.
std::uint64_t binomial_u64(int n, int k);

/// Exact binomial coefficient for any n >= 0.
BigInt binomial_exact(int n, int k);

/// Generalized binomial coefficient gamma (gamma-1) ... (gamma-i+1) / i!,
/// evaluated as a falling factorial divided by i!. It vanishes when gamma is
/// a nonnegative integer smaller than i.
Rational generalized_binomial(const Rational& gamma, int i);

/// Same as above in floating point, by the recurrence
/// C(gamma, i) = C(gamma, i-1) (gamma - i + 1) / i.
double generalized_binomial(double gamma, int i);

/// log(n!) accumulated as a running sum of logarithms.
double log_factorial(int n);

/// Visits every integer partition of n as a multiplicity vector m, where
/// m[j-1] counts the parts equal to j (so sum_j j*m[j-1] == n).
void for_each_partition(int n, const std::function<void(std::span<const int>)>& visit);

/// Visits every weak composition of `total` into `parts` nonnegative
/// integers (stars and bars).
void for_each_composition(int total, int parts,
                          const std::function<void(std::span<const int>)>& visit);

/// Multinomial coefficient (sum alpha)! / prod alpha_u! as a double.
double multinomial(std::span<const int> alpha);

/// Exact multinomial coefficient.
BigInt multinomial_exact(std::span<const int> alpha);

}  // namespace fchi
