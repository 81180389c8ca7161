#include "fchi/chi.hpp"

#include "fchi/errors.hpp"
#include "pair_integral.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fchi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Largest x with exp(x) finite.
constexpr double kMaxLogDouble = 709.78;

void check_order(int i) {
  if (i < 2) throw InputError("chi order must be >= 2, got " + std::to_string(i));
}

void check_lambda(double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda)) throw InputError("lambda must be finite and nonzero");
}

// Terms sign * count * exp(log_rest) of an alternating closed form, summed
// smallest magnitude first. The integer count (a binomial or multinomial
// coefficient) is kept out of the exponent so it enters exactly.
struct LogTerms {
  std::vector<double> log_mag;
  std::vector<double> count;
  std::vector<double> log_rest;
  std::vector<int> sign;

  void add(int s, double c, double lr) {
    sign.push_back(s);
    count.push_back(c);
    log_rest.push_back(lr);
    log_mag.push_back(std::log(c) + lr);
  }

  double sum(int order) const {
    const double top = log_mag.empty() ? -kInf : *std::max_element(log_mag.begin(), log_mag.end());
    if (top > kMaxLogDouble) {
      if (order % 2 == 0) return kInf;
      throw OverflowError("chi_" + std::to_string(order) +
                          " overflows double precision and its sign is ambiguous");
    }
    std::vector<double> terms;
    terms.reserve(log_mag.size());
    for (std::size_t j = 0; j < log_mag.size(); ++j) terms.push_back(sign[j] * count[j] * std::exp(log_rest[j]));
    const double total = sorted_compensated_sum(std::move(terms));
    // An even power integrates to a nonnegative value; only rounding can
    // push the cancelled sum below zero.
    return (order % 2 == 0) ? std::max(0.0, total) : total;
  }
};

// Sign of (-lambda)^e.
int neg_lambda_sign(double lambda, int e) { return (lambda > 0.0 && e % 2 == 1) ? -1 : 1; }

[[noreturn]] void interpolate_outside(const AefFamily& fam, int i, int j, std::span<const double> theta_p,
                                      std::span<const double> theta_q) {
  std::ostringstream msg;
  msg << "chi_" << i << " diverges: the interpolate at j = " << j << " leaves the parameter space";
  if (fam.kind() == FamilyKind::trunc_exp)
    msg << " (convergence needs i*theta_q - (i-1)*theta_p > 0, got "
        << format_double(i * theta_q[0] - (i - 1) * theta_p[0]) << ")";
  throw DivergenceError(msg.str());
}

detail::PairPlan chi_plan(const AefFamily& fam, std::span<const double> theta_p,
                          std::span<const double> theta_q, int i, double lambda) {
  detail::PairPlan plan;
  plan.spread = i;
  if (fam.kind() == FamilyKind::trunc_exp && !fam.trunc_b()) {
    // The integrand mixes exp(-((1-j) theta_p + j theta_q) x) for j = 0..i;
    // the slowest rate sits at an end point.
    const double rate_i = i * theta_q[0] - (i - 1) * theta_p[0];
    if (!(rate_i > 0.0)) interpolate_outside(fam, i, i, theta_p, theta_q);
    plan.decay = std::min(theta_p[0], rate_i);
  }
  if (fam.kind() == FamilyKind::poisson) {
    // |p (r - lambda)^i| <= g(x) = p (r + |lambda|)^i, and
    // g(x+1) / g(x) <= lambda_p max(1, lambda_q / lambda_p)^i / (x+1).
    const double lam_p = std::exp(theta_p[0]);
    const double growth = lam_p * std::pow(std::max(1.0, std::exp(theta_q[0] - theta_p[0])), i);
    const double L = std::abs(lambda);
    plan.count_tail = [growth, L, i](long x, double lp, double lq) {
      const double rho = growth / (static_cast<double>(x) + 2.0);
      if (rho >= 1.0) return kInf;
      const double g = std::exp(lp + i * std::log(std::exp(lq - lp) + L));
      return g * rho / (1.0 - rho);
    };
  }
  return plan;
}

}  // namespace

std::string to_string(ChiProvenance prov) {
  switch (prov) {
    case ChiProvenance::discrete_exact:
      return "discrete-exact";
    case ChiProvenance::aef_closed_form:
      return "aef-closed-form";
    case ChiProvenance::quadrature:
      return "quadrature";
    case ChiProvenance::file:
      return "file";
  }
  return "?";
}

ChiBasis::ChiBasis(std::vector<double> values, ChiProvenance provenance, std::string pair)
    : values_(std::move(values)), provenance_(provenance), pair_(std::move(pair)) {
  if (values_.empty()) throw InputError("a chi basis needs at least chi_2");
}

double ChiBasis::operator[](int order) const {
  if (order < 2 || order > max_order())
    throw InputError("order " + std::to_string(order) + " outside the basis range 2.." +
                     std::to_string(max_order()));
  return values_[order - 2];
}

double chi_pm_discrete(const DiscreteDistribution& p, const DiscreteDistribution& q, int i, double lambda) {
  check_order(i);
  check_lambda(lambda);
  if (p.size() != q.size()) throw InputError("distributions have different support sizes");
  CompensatedSum total;
  bool overflow = false;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (p[s] == 0.0) {
      if (q[s] == 0.0) continue;
      return kInf;
    }
    const double d = q[s] - lambda * p[s];
    const double t = d * std::pow(d / p[s], i - 1);
    if (!std::isfinite(t)) {
      overflow = true;
      continue;
    }
    total.add(t);
  }
  if (overflow) {
    if (i % 2 == 0) return kInf;
    throw OverflowError("chi_" + std::to_string(i) + " overflows double precision and its sign is ambiguous");
  }
  return total.value();
}

double chi_abs(const DiscreteDistribution& p, const DiscreteDistribution& q, int s) {
  check_order(s);
  if (p.size() != q.size()) throw InputError("distributions have different support sizes");
  CompensatedSum total;
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] == 0.0) {
      if (q[a] == 0.0) continue;
      return kInf;
    }
    const double d = std::abs(q[a] - p[a]);
    total.add(d * std::pow(d / p[a], s - 1));
  }
  return total.value();
}

double chi_pm_aef(const AefFamily& fam, std::span<const double> theta_p, std::span<const double> theta_q,
                  int i, double lambda) {
  check_order(i);
  check_lambda(lambda);
  const double Fp = fam.log_normalizer(theta_p);
  const double Fq = fam.log_normalizer(theta_q);
  const double log_lambda = std::log(std::abs(lambda));
  Param theta(theta_p.size());
  LogTerms terms;
  for (int j = 0; j <= i; ++j) {
    // Written relative to theta_p so that equal parameters give E = 0 exactly.
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] = theta_p[k] + j * (theta_q[k] - theta_p[k]);
    if (!fam.in_domain(theta)) interpolate_outside(fam, i, j, theta_p, theta_q);
    const double E = (fam.log_normalizer(theta) - Fp) - j * (Fq - Fp);
    terms.add(neg_lambda_sign(lambda, i - j), binomial(i, j), (i - j) * log_lambda + E);
  }
  return terms.sum(i);
}

double chi_pm_mixture(const AefFamily& fam, std::span<const double> theta_p, const MixtureSpec& mix, int i,
                      double lambda) {
  check_order(i);
  check_lambda(lambda);
  mix.validate(fam);
  const double Fp = fam.log_normalizer(theta_p);
  const std::size_t l = mix.weights.size();
  std::vector<double> Fu(l);
  std::vector<double> log_w(l);
  for (std::size_t u = 0; u < l; ++u) {
    Fu[u] = fam.log_normalizer(mix.thetas[u]);
    log_w[u] = std::log(mix.weights[u]);
  }
  const double log_lambda = std::log(std::abs(lambda));
  Param theta(theta_p.size());
  LogTerms terms;
  for (int s = 0; s <= i; ++s) {
    const double head = (i - s) * log_lambda;
    const int sign = neg_lambda_sign(lambda, i - s);
    for_each_composition(s, static_cast<int>(l), [&](std::span<const int> alpha) {
      double E = 0.0;
      double lw = head;
      for (std::size_t k = 0; k < theta.size(); ++k) theta[k] = theta_p[k];
      for (std::size_t u = 0; u < l; ++u) {
        if (alpha[u] == 0) continue;
        for (std::size_t k = 0; k < theta.size(); ++k) theta[k] += alpha[u] * (mix.thetas[u][k] - theta_p[k]);
        E -= alpha[u] * (Fu[u] - Fp);
        lw += alpha[u] * log_w[u];
      }
      if (!fam.in_domain(theta)) {
        std::ostringstream msg;
        msg << "chi_" << i << " diverges: a mixture interpolate of total weight s = " << s
            << " leaves the parameter space";
        throw DivergenceError(msg.str());
      }
      terms.add(sign, binomial(i, s) * multinomial(alpha), lw + E + (fam.log_normalizer(theta) - Fp));
    });
  }
  return terms.sum(i);
}

double chi_pm_quadrature(const AefFamily& fam, std::span<const double> theta_p, std::span<const double> theta_q,
                         int i, double lambda, std::optional<Domain> domain) {
  check_order(i);
  check_lambda(lambda);
  auto plan = chi_plan(fam, theta_p, theta_q, i, lambda);
  plan.domain = domain;
  auto g = [i, lambda](double lp, double lq) { return detail::power_integrand(lp, lq, i, lambda, false); };
  return detail::integrate_pair(fam, theta_p, theta_q, g, plan).value;
}

double chi_abs(const AefFamily& fam, std::span<const double> theta_p, std::span<const double> theta_q, int s) {
  check_order(s);
  auto plan = chi_plan(fam, theta_p, theta_q, s, 1.0);
  auto g = [s](double lp, double lq) { return detail::power_integrand(lp, lq, s, 1.0, true); };
  return detail::integrate_pair(fam, theta_p, theta_q, g, plan).value;
}

double chi_pm_trunc_exp_closed(double theta1, double theta2, int i) {
  check_order(i);
  if (!(theta1 > 0.0) || !(theta2 > 0.0)) throw DomainError("truncated exponential rates must be positive");
  if (!(i * theta2 > (i - 1) * theta1)) {
    throw DivergenceError("chi_" + std::to_string(i) +
                          " diverges: convergence needs i*theta_q - (i-1)*theta_p > 0, got " +
                          format_double(i * theta2 - (i - 1) * theta1));
  }
  if (i == 3) {
    const double a = theta1;
    const double b = theta2;
    const double num = 2 * std::pow(b, 4) - 10 * a * std::pow(b, 3) + 18 * a * a * b * b -
                       14 * std::pow(a, 3) * b + 4 * std::pow(a, 4);
    return num / (a * a * (6 * b * b - 7 * a * b + 2 * a * a));
  }
  // int p^(1-j) q^j = r^j / (j r - j + 1) with r = theta2 / theta1.
  const double r = theta2 / theta1;
  std::vector<double> terms;
  for (int j = 0; j <= i; ++j) {
    const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
    terms.push_back(sign * binomial(i, j) * std::pow(r, j) / (j * r - j + 1.0));
  }
  return sorted_compensated_sum(std::move(terms));
}

ChiBasis chi_basis_discrete(const DiscreteDistribution& p, const DiscreteDistribution& q, int k_max) {
  check_order(k_max);
  std::vector<double> v;
  for (int i = 2; i <= k_max; ++i) v.push_back(chi_pm_discrete(p, q, i));
  return ChiBasis(std::move(v), ChiProvenance::discrete_exact, "discrete");
}

ChiBasis chi_basis_aef(const AefFamily& fam, std::span<const double> theta_p, std::span<const double> theta_q,
                       int k_max) {
  check_order(k_max);
  std::vector<double> v;
  for (int i = 2; i <= k_max; ++i) v.push_back(chi_pm_aef(fam, theta_p, theta_q, i));
  return ChiBasis(std::move(v), ChiProvenance::aef_closed_form, fam.name());
}

ChiBasis chi_basis_mixture(const AefFamily& fam, std::span<const double> theta_p, const MixtureSpec& mix,
                           int k_max) {
  check_order(k_max);
  std::vector<double> v;
  for (int i = 2; i <= k_max; ++i) v.push_back(chi_pm_mixture(fam, theta_p, mix, i));
  return ChiBasis(std::move(v), ChiProvenance::aef_closed_form, fam.name() + " mixture");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_basis_csv(std::ostream& out, const ChiBasis& basis) {
  out << "order,chi_pm\n";
  for (int i = 2; i <= basis.max_order(); ++i) out << i << ',' << format_double(basis[i]) << '\n';
}

ChiBasis read_basis_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("basis file is empty");
  if (line.rfind("order,chi_pm", 0) != 0) throw InputError("basis file must start with the header order,chi_pm");
  std::vector<double> values;
  int expected = 2;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() < 2 || cells.size() > 3) throw InputError("malformed basis row: " + line);
    int order = 0;
    auto r1 = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), order);
    if (r1.ec != std::errc() || r1.ptr != cells[0].data() + cells[0].size() || order != expected)
      throw InputError("basis orders must run 2, 3, ... without gaps; bad row: " + line);
    double v = 0.0;
    auto r2 = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), v);
    if (r2.ec != std::errc() || r2.ptr != cells[1].data() + cells[1].size())
      throw InputError("malformed basis value: " + cells[1]);
    values.push_back(v);
    ++expected;
  }
  if (values.empty()) throw InputError("basis file holds no rows");
  return ChiBasis(std::move(values), ChiProvenance::file, "file");
}

}  // namespace fchi
