#include "fchi/numeric.hpp"

#include "fchi/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cctype>

namespace fchi {

namespace {

constexpr int kMaxExactRow = 67;
constexpr int kMaxDoubleRow = 1024;

const std::vector<std::vector<double>>& double_pascal() {
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> rows(kMaxDoubleRow + 1);
    rows[0] = {1.0};
    for (int n = 1; n <= kMaxDoubleRow; ++n) {
      rows[n].assign(n + 1, 1.0);
      for (int k = 1; k < n; ++k) rows[n][k] = rows[n - 1][k - 1] + rows[n - 1][k];
    }
    return rows;
  }();
  return table;
}

const std::array<std::array<std::uint64_t, kMaxExactRow + 1>, kMaxExactRow + 1>& u64_pascal() {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kMaxExactRow + 1>, kMaxExactRow + 1> t{};
    for (int n = 0; n <= kMaxExactRow; ++n) {
      t[n][0] = t[n][n] = 1;
      for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
    }
    return t;
  }();
  return table;
}

BigInt parse_integer(std::string_view digits) {
  if (digits.empty()) throw InputError("empty integer literal");
  BigInt value = 0;
  for (char ch : digits) {
    if (ch < '0' || ch > '9') throw InputError("invalid digit in number: " + std::string(digits));
    value = value * 10 + (ch - '0');
  }
  return value;
}

BigInt pow10(int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

void partitions_rec(int remaining, int max_part, std::vector<int>& m,
                    const std::function<void(std::span<const int>)>& visit) {
  if (remaining == 0) {
    visit(m);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    ++m[part - 1];
    partitions_rec(remaining - part, part, m, visit);
    --m[part - 1];
  }
}

void compositions_rec(int remaining, std::size_t slot, std::vector<int>& alpha,
                      const std::function<void(std::span<const int>)>& visit) {
  if (slot + 1 == alpha.size()) {
    alpha[slot] = remaining;
    visit(alpha);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    alpha[slot] = v;
    compositions_rec(remaining - v, slot + 1, alpha, visit);
  }
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw InputError("empty number");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in " + std::string(text));
    return num / den;
  }

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  int exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    int value = 0;
    const char* first = exp_text.data();
    if (!exp_text.empty() && exp_text.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, exp_text.data() + exp_text.size(), value);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size())
      throw InputError("invalid exponent in number: " + std::string(text));
    exponent = value;
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
    exponent -= static_cast<int>(s.size() - dot - 1);
    if (digits.empty()) throw InputError("invalid number: " + std::string(text));
  } else {
    digits = std::string(s);
  }
  Rational r(parse_integer(digits));
  if (exponent > 0) r *= Rational(pow10(exponent));
  if (exponent < 0) r /= Rational(pow10(-exponent));
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double sorted_compensated_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end(),
            [](double a, double b) { return std::abs(a) < std::abs(b); });
  CompensatedSum sum;
  for (double t : terms) sum.add(t);
  return sum.value();
}

double binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  if (n > kMaxDoubleRow) {
    return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
  }
  return double_pascal()[n][k];
}

std::uint64_t binomial_u64(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n > kMaxExactRow) throw InputError("exact 64-bit binomial requested beyond row 67");
  return u64_pascal()[n][k];
}

BigInt binomial_exact(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n <= kMaxExactRow) return BigInt(u64_pascal()[n][k]);
  BigInt r = 1;
  k = std::min(k, n - k);
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

Rational generalized_binomial(const Rational& gamma, int i) {
  if (i < 0) return 0;
  Rational falling = 1;
  BigInt factorial = 1;
  for (int j = 0; j < i; ++j) {
    falling *= gamma - j;
    factorial *= j + 1;
  }
  return falling / Rational(factorial);
}

double generalized_binomial(double gamma, int i) {
  if (i < 0) return 0.0;
  double c = 1.0;
  for (int j = 1; j <= i; ++j) c *= (gamma - j + 1) / j;
  return c;
}

double log_factorial(int n) {
  double s = 0.0;
  for (int j = 2; j <= n; ++j) s += std::log(static_cast<double>(j));
  return s;
}

void for_each_partition(int n, const std::function<void(std::span<const int>)>& visit) {
  if (n < 0) return;
  std::vector<int> m(static_cast<std::size_t>(std::max(n, 0)), 0);
  partitions_rec(n, n, m, visit);
}

void for_each_composition(int total, int parts,
                          const std::function<void(std::span<const int>)>& visit) {
  if (total < 0 || parts <= 0) return;
  std::vector<int> alpha(static_cast<std::size_t>(parts), 0);
  compositions_rec(total, 0, alpha, visit);
}

double multinomial(std::span<const int> alpha) {
  double r = 1.0;
  int running = 0;
  for (int a : alpha) {
    running += a;
    r *= binomial(running, a);
  }
  return r;
}

BigInt multinomial_exact(std::span<const int> alpha) {
  BigInt r = 1;
  int running = 0;
  for (int a : alpha) {
    running += a;
    r *= binomial_exact(running, a);
  }
  return r;
}

}  // namespace fchi
