#include "fchi/expansion.hpp"

#include "fchi/errors.hpp"
#include "fchi/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace fchi {

namespace {

// Running sum f(1) + c_2 chi_2 + ... ; visit(i, term, partial) after each order.
// chi_expansion and converge share it so their sums agree bit for bit.
template <class Visit>
double accumulate(const Generator& gen, const ChiBasis& basis, int k, Visit&& visit) {
  if (k < 2) throw InputError("expansion order must be >= 2");
  if (k > basis.max_order())
    throw InputError("expansion order " + std::to_string(k) + " exceeds the basis length " +
                     std::to_string(basis.max_order()));
  const auto c = gen.coeffs(k);
  CompensatedSum sum;
  sum.add(gen.f_at_one());
  for (int i = 2; i <= k; ++i) {
    const double chi = basis[i];
    const double t = (c[i - 2] == 0.0) ? 0.0 : c[i - 2] * chi;
    sum.add(t);
    visit(i, t, sum.value());
  }
  return sum.value();
}

}  // namespace

double chi_expansion(const Generator& gen, const ChiBasis& basis, int k) {
  return accumulate(gen, basis, k, [](int, double, double) {});
}

Bound remainder_bound(const Generator& gen, int k, const RatioBounds& rb, std::optional<double> chi_abs_k1) {
  validate(rb);
  if (k < 1) throw InputError("remainder order must be >= 1");
  double B = 0.0;
  if (chi_abs_k1) {
    if (!(*chi_abs_k1 >= 0.0)) throw InputError("absolute chi must be nonnegative");
    B = *chi_abs_k1;
  } else {
    if (!rb.bounded()) return Bound::unbounded();
    B = std::pow(rb.width(), k + 1);
  }
  if (B == 0.0) return Bound::finite(0.0);
  if (!std::isfinite(B)) return Bound::unbounded();
  const Bound sup = gen.deriv_sup(k, rb.m, rb.M);
  if (!sup.bounded()) return Bound::unbounded();
  if (sup.value() == 0.0) return Bound::finite(0.0);
  const double v = std::exp(std::log(sup.value()) - log_factorial(k + 1) + std::log(B));
  return std::isfinite(v) ? Bound::finite(v) : Bound::unbounded();
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::converging:
      return "converging";
    case Verdict::diverging:
      return "diverging";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

Verdict classify(std::span<const double> terms, std::span<const double> partial_sums, double tol) {
  const std::size_t n = terms.size();
  if (n == 0 || partial_sums.size() != n) throw InputError("classify needs matching, nonempty sequences");
  for (std::size_t k = 0; k < n; ++k)
    if (!std::isfinite(terms[k]) || !std::isfinite(partial_sums[k])) return Verdict::diverging;

  if (n >= 5) {
    bool growing = true;
    for (std::size_t k = n - 4; k < n; ++k) growing = growing && std::abs(terms[k]) > std::abs(terms[k - 1]);
    if (growing && std::abs(terms[n - 1]) > std::abs(terms[0])) return Verdict::diverging;
  }
  if (n < 3) return Verdict::inconclusive;

  auto small = [&](std::size_t k) {
    return std::abs(terms[k]) < tol * std::max(1.0, std::abs(partial_sums[k]));
  };
  if (small(n - 3) && small(n - 2) && small(n - 1)) return Verdict::converging;

  const double a = std::abs(terms[n - 3]);
  const double b = std::abs(terms[n - 2]);
  const double c = std::abs(terms[n - 1]);
  if (a > b && b > c) {
    const double rho = std::max(b / a, c / b);
    if (rho < 1.0 && c * rho / (1.0 - rho) < tol * std::max(1.0, std::abs(partial_sums[n - 1])))
      return Verdict::converging;
  }
  return Verdict::inconclusive;
}

ExpansionReport converge(const Generator& gen, const BasisProducer& producer, const ConvergeOptions& opts) {
  if (opts.k_max < 4) throw InputError("converge needs k_max >= 4");
  if (!(opts.tol > 0.0)) throw InputError("tolerance must be positive");
  ExpansionReport report;
  report.generator = gen.name();
  report.exact_value = opts.exact_value;
  try {
    report.basis = producer(opts.k_max);
  } catch (const Error& e) {
    report.error = e.what();
    report.verdict = Verdict::diverging;
    return report;
  }
  accumulate(gen, *report.basis, opts.k_max, [&](int, double t, double s) {
    report.terms.push_back(t);
    report.partial_sums.push_back(s);
  });
  if (opts.ratio_bounds) {
    std::vector<Bound> bounds;
    for (int k = 2; k <= opts.k_max; ++k) {
      std::optional<double> abs_chi;
      if (opts.chi_abs) abs_chi = opts.chi_abs(k + 1);
      bounds.push_back(remainder_bound(gen, k, *opts.ratio_bounds, abs_chi));
    }
    report.remainder_bounds = std::move(bounds);
  }
  report.verdict = classify(report.terms, report.partial_sums, opts.tol);
  return report;
}

std::vector<double> batch_evaluate(std::span<const Generator> gens, const ChiBasis& basis) {
  std::vector<double> out;
  out.reserve(gens.size());
  for (const auto& g : gens) out.push_back(chi_expansion(g, basis, basis.max_order()));
  return out;
}

std::vector<double> batch_evaluate(std::span<const Generator> gens, const BasisProducer& producer, int k_max) {
  return batch_evaluate(gens, producer(k_max));
}

double alpha_odd_expansion(const AefFamily& fam, std::span<const double> theta_p, std::span<const double> theta_q,
                           int k) {
  if (k < 2) throw InputError("alpha_odd_expansion needs k >= 2");
  const Generator gen = Generator::alpha(2.0 * k - 1.0);
  return chi_expansion(gen, chi_basis_aef(fam, theta_p, theta_q, k), k);
}

}  // namespace fchi
