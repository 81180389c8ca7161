// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include "common/reference_values.hpp"
#include "fchi/chi.hpp"
#include "fchi/errors.hpp"
#include "fchi/expansion.hpp"
#include "fchi/reference.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fchi;
namespace ref = fchi::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string str(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

bool near_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

// Best of several runs, in milliseconds.
double time_ms(const std::function<void()>& body, int runs = 5) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < runs; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

DiscreteDistribution random_distribution(std::mt19937_64& rng, int size, double floor) {
  std::uniform_real_distribution<double> w(floor, 1.0);
  std::vector<double> p(size);
  double total = 0.0;
  for (double& v : p) total += (v = w(rng));
  for (double& v : p) v /= total;
  CompensatedSum head;
  for (int s = 0; s + 1 < size; ++s) head.add(p[s]);
  p.back() = 1.0 - head.value();
  return DiscreteDistribution(p);
}

BasisProducer discrete_producer(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  return [p, q](int k) { return chi_basis_discrete(p, q, k); };
}

ConvergeOptions discrete_options(const DiscreteDistribution& p, const DiscreteDistribution& q, int k_max) {
  ConvergeOptions opts;
  opts.k_max = k_max;
  opts.ratio_bounds = density_ratio_bounds(p, q);
  opts.chi_abs = [p, q](int s) { return chi_abs(p, q, s); };
  return opts;
}

using Big = boost::multiprecision::cpp_bin_float_50;

// sum_s p_s f(q_s / p_s) in 50 digits.
double exact_high_precision(const std::string& name, const DiscreteDistribution& p, const DiscreteDistribution& q) {
  const Big e = boost::multiprecision::exp(Big(1));
  Big total = 0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    const Big ps = p[s];
    const Big u = Big(q[s]) / ps;
    Big f;
    if (name == "exp") {
      f = exp(u) - e * u;
    } else if (name == "js") {
      f = -(u + 1) * log((1 + u) / 2) + u * log(u);
    } else if (name == "jeffreys") {
      f = (u - 1) * log(u);
    } else if (name == "kl") {
      f = -log(u);
    } else if (name == "harmonic") {
      f = 2 * u / (u + 1);
    } else {
      throw std::logic_error("no oracle for " + name);
    }
    total += ps * f;
  }
  return static_cast<double>(total);
}

// Rounding of the partial sum, plus the dropped linear term f'(1) sum (q - p)
// that double-precision inputs only make zero to within an ulp.
double rounding_slack(const Generator& gen, const DiscreteDistribution& p, const DiscreteDistribution& q,
                      const ChiBasis& basis, int k) {
  double terms_mag = std::abs(gen.f_at_one());
  const auto c = gen.coeffs(k);
  for (int i = 2; i <= k; ++i) terms_mag += std::abs(c[i - 2] * basis[i]);
  Big mass_gap = 0;
  for (std::size_t s = 0; s < p.size(); ++s) mass_gap += Big(q[s]) - Big(p[s]);
  return 8 * std::numeric_limits<double>::epsilon() * terms_mag +
         std::abs(gen.slope_at_one()) * std::abs(static_cast<double>(mass_gap));
}

Outcome gaussian_table() {
  Outcome o;
  const auto fam = AefFamily::gaussian_iso(1);
  const Param tp{0.0};
  const Param tq{1.0};
  std::vector<double> chi(9);
  const double ms = time_ms([&] {
    for (int i = 2; i <= 10; ++i) chi[i - 2] = chi_pm_aef(fam, tp, tq, i);
  });
  double worst = 0.0;
  for (int i = 2; i <= 10; ++i) {
    const double expected = ref::kGaussianChi[i - 2];
    worst = std::max(worst, std::abs(chi[i - 2] - expected) / expected);
  }
  if (worst > 1e-9) o.fail("worst relative error " + str(worst));
  if (ms >= 1.0) o.fail("runtime " + str(ms) + " ms");
  if (o.pass) o.detail = "worst relative error " + str(worst) + ", " + str(ms) + " ms";
  return o;
}

Outcome bernoulli_table() {
  Outcome o;
  const auto p = DiscreteDistribution::bernoulli(0.9);
  const auto q = DiscreteDistribution::bernoulli(0.3);
  const auto exp = Generator::exponential();
  std::optional<ChiBasis> basis;
  std::vector<double> sums(29);
  double exact = 0.0;
  const double ms = time_ms([&] {
    basis = chi_basis_discrete(p, q, 30);
    for (int k = 2; k <= 30; ++k) sums[k - 2] = chi_expansion(exp, *basis, k);
    exact = exact_f_divergence_discrete(exp, p, q);
  });
  const std::vector<Rational> pr{Rational(9, 10), Rational(1, 10)};
  const std::vector<Rational> qr{Rational(3, 10), Rational(7, 10)};
  if (chi_pm_discrete_exact<Rational>(pr, qr, 2) != 4) o.fail("exact chi_2 is not 4");
  for (int i = 2; i <= 30; ++i)
    if (!near_rel((*basis)[i], ref::kBernoulliChi[i - 2], 1e-10)) o.fail("chi_" + std::to_string(i) + " off");
  for (int k = 2; k <= 30; ++k)
    if (!near_rel(sums[k - 2], ref::kBernoulliExpPartialSums[k - 2], 1e-9)) o.fail("E_" + std::to_string(k) + " off");
  if (!near_rel(exact, ref::kBernoulliExpExact, 1e-12)) o.fail("exact value " + str(exact));
  const double err = std::abs(sums.back() - ref::kBernoulliExpExact);
  if (err < 4e-11 || err > 7e-11) o.fail("|S_30 - exact| = " + str(err));
  if (ms >= 10.0) o.fail("runtime " + str(ms) + " ms");
  if (o.pass) o.detail = "|S_30 - exact| = " + str(err) + ", " + str(ms) + " ms";
  return o;
}

Outcome js_coefficient() {
  Outcome o;
  const Rational c = Generator::js().exact_coeff(23);
  if (c != Rational(-182361, 92274688)) o.fail("got " + c.str());
  else o.detail = "c_23 = " + c.str();
  return o;
}

Outcome odd_alpha() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> log_rate(-0.5, 0.5);
  struct Case {
    AefFamily fam;
    std::function<double()> draw;
  };
  const std::vector<Case> cases{{AefFamily::poisson(), [&] { return log_rate(rng); }},
                                {AefFamily::gaussian_iso(1), [&] { return unit(rng); }},
                                {AefFamily::gaussian_iso(3), [&] { return unit(rng); }},
                                {AefFamily::categorical(4), [&] { return unit(rng); }}};
  double worst = 0.0;
  int checked = 0;
  for (const auto& c : cases)
    for (int trial = 0; trial < 20; ++trial) {
      Param tp(c.fam.dim()), tq(c.fam.dim());
      for (auto& v : tp) v = c.draw();
      for (auto& v : tq) v = c.draw();
      for (int k : {2, 3, 4}) {
        const double alpha = 2.0 * k - 1;
        const double series = alpha_odd_expansion(c.fam, tp, tq, k);
        const double closed = exact_alpha_aef(c.fam, tp, tq, alpha);
        const double rel = std::abs(series - closed) / std::abs(closed);
        worst = std::max(worst, rel);
        ++checked;
        if (rel > 1e-10) o.fail(c.fam.name() + " alpha " + str(alpha) + " relative error " + str(rel));
      }
    }
  if (o.pass) o.detail = std::to_string(checked) + " cases, worst relative error " + str(worst);
  return o;
}

Outcome remainder_certification() {
  Outcome o;
  std::mt19937_64 rng(55);
  const std::vector<Generator> gens{Generator::exponential(), Generator::js(), Generator::jeffreys(), Generator::kl(),
                                    Generator::harmonic()};
  int pairs = 0;
  int checks = 0;
  int violations = 0;
  while (pairs < 200) {
    const int atoms = (pairs % 2 == 0) ? 2 : 4;
    const auto p = random_distribution(rng, atoms, 0.05);
    const auto q = random_distribution(rng, atoms, 0.05);
    const auto rb = density_ratio_bounds(p, q);
    if (!(rb.m > 0.0) || rb.width() >= 2.0) continue;
    ++pairs;
    const auto basis = chi_basis_discrete(p, q, 20);
    for (const auto& g : gens) {
      const double exact = exact_high_precision(g.name(), p, q);
      for (int k = 2; k <= 20; ++k) {
        const Bound b = remainder_bound(g, k, rb);
        if (!b.bounded()) {
          ++violations;
          continue;
        }
        ++checks;
        const double err = std::abs(exact - chi_expansion(g, basis, k));
        if (err > b.value() + rounding_slack(g, p, q, basis, k)) {
          ++violations;
          o.fail(g.name() + " k=" + std::to_string(k) + " error " + str(err) + " above bound " + str(b.value()));
        }
      }
    }
  }
  if (violations > 0) o.fail(std::to_string(violations) + " violations");
  if (o.pass) o.detail = std::to_string(checks) + " checks over " + std::to_string(pairs) + " pairs, zero violations";
  return o;
}

Outcome verdicts() {
  Outcome o;
  const auto js = Generator::js();
  const auto fam = AefFamily::gaussian_iso(1);
  ConvergeOptions gopts;
  gopts.k_max = 20;
  const auto gauss = converge(js, [&](int k) { return chi_basis_aef(fam, Param{0.0}, Param{1.0}, k); }, gopts);
  if (gauss.verdict != Verdict::diverging) o.fail("JS gaussian: " + to_string(gauss.verdict));

  auto run = [](const Generator& g, double lp, double lq, int k) {
    const auto p = DiscreteDistribution::bernoulli(lp);
    const auto q = DiscreteDistribution::bernoulli(lq);
    return converge(g, discrete_producer(p, q), discrete_options(p, q, k)).verdict;
  };
  if (const auto v = run(js, 0.05, 0.85, 30); v != Verdict::diverging) o.fail("JS (0.05:0.85): " + to_string(v));
  if (const auto v = run(js, 0.1, 0.05, 30); v != Verdict::converging) o.fail("JS (0.1:0.05): " + to_string(v));
  if (const auto v = run(Generator::exponential(), 0.9, 0.3, 30); v != Verdict::converging)
    o.fail("exp (0.9:0.3): " + to_string(v));
  if (o.pass) o.detail = "all four verdicts as expected";
  return o;
}

Outcome truncated_exponential() {
  Outcome o;
  const auto fam = AefFamily::trunc_exp(0.0, std::nullopt);
  double worst = 0.0;
  int cells = 0;
  for (double t1 : {0.5, 1.0, 1.5, 2.0, 3.0})
    for (double ratio : {0.7, 0.9, 1.2, 1.6, 2.5}) {
      const double t2 = t1 * ratio;
      ++cells;
      const double closed = chi_pm_trunc_exp_closed(t1, t2);
      const double quad = chi_pm_quadrature(fam, Param{t1}, Param{t2}, 3);
      const double rel = std::abs(closed - quad) / std::abs(closed);
      worst = std::max(worst, rel);
      if (rel > 1e-7) o.fail("(" + str(t1) + ", " + str(t2) + ") relative error " + str(rel));
    }
  int raised = 0;
  for (double t1 : {0.5, 1.0, 2.0, 3.0})
    for (double ratio : {0.2, 0.5, 2.0 / 3.0}) {
      try {
        chi_pm_trunc_exp_closed(t1, t1 * ratio);
        o.fail("no divergence error at (" + str(t1) + ", " + str(t1 * ratio) + ")");
      } catch (const DivergenceError&) {
        ++raised;
      }
    }
  if (o.pass)
    o.detail = std::to_string(cells) + " cells, worst relative error " + str(worst) + ", " + std::to_string(raised) +
               " divergent cells raised";
  return o;
}

Outcome oracle_triangle() {
  Outcome o;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> prob(0.05, 0.95);
  const auto fam = AefFamily::categorical(1);
  const std::vector<Generator> gens{Generator::kl(), Generator::js(), Generator::exponential(),
                                    Generator::jeffreys(), Generator::harmonic(), Generator::alpha(0.0),
                                    Generator::alpha(0.5)};
  int converged = 0;
  int closed_forms = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = DiscreteDistribution::bernoulli(prob(rng));
    const auto q = DiscreteDistribution::bernoulli(prob(rng));
    const Param tp = fam.natural_param(p.probs());
    const Param tq = fam.natural_param(q.probs());
    for (const auto& g : gens) {
      const double exact = exact_f_divergence_discrete(g, p, q);
      // Closed form in natural parameters: the alpha-divergence formula,
      // otherwise summation of the family density.
      const bool is_alpha = g.name().rfind("alpha:", 0) == 0;
      const double aef = is_alpha ? exact_alpha_aef(fam, tp, tq, std::stod(g.name().substr(6)))
                                  : quadrature_f_divergence(g, fam, tp, tq).value;
      closed_forms += is_alpha;
      if (std::abs(aef - exact) > 1e-8) o.fail(g.name() + " discrete vs categorical " + str(std::abs(aef - exact)));
      const auto report = converge(g, discrete_producer(p, q), discrete_options(p, q, 40));
      if (report.verdict != Verdict::converging) continue;
      ++converged;
      const Bound b = report.remainder_bounds->back();
      const double tol = 1e-8 + (b.bounded() ? 2 * b.value() : 0.0);
      const double s = report.partial_sum(40);
      if (std::abs(s - exact) > tol) o.fail(g.name() + " expansion vs discrete " + str(std::abs(s - exact)));
      if (std::abs(s - aef) > tol) o.fail(g.name() + " expansion vs categorical " + str(std::abs(s - aef)));
    }
  }
  if (converged == 0) o.fail("no expansion converged");
  if (o.pass)
    o.detail = std::to_string(converged) + " converged expansions, " + std::to_string(closed_forms) +
               " alpha closed forms";
  return o;
}

Outcome odd_degeneracy() {
  Outcome o;
  const std::vector<Rational> p{Rational(1, 2), Rational(1, 2)};
  int checked = 0;
  for (int n = 1; n <= 9; ++n) {
    const std::vector<Rational> q{Rational(n, 10), Rational(10 - n, 10)};
    for (int i = 3; i <= 15; i += 2) {
      ++checked;
      const Rational chi = chi_pm_discrete_exact<Rational>(p, q, i);
      if (chi != 0) o.fail("chi_" + std::to_string(i) + " at " + std::to_string(n) + "/10 is " + chi.str());
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " exact zeros";
  return o;
}

Outcome batch_scheme() {
  Outcome o;
  const auto p = DiscreteDistribution::bernoulli(0.9);
  const auto q = DiscreteDistribution::bernoulli(0.3);
  const auto gens = catalog();
  if (gens.size() != 8) o.fail("catalog has " + std::to_string(gens.size()) + " generators");
  CountingBasisProducer counting(discrete_producer(p, q));
  const auto values = batch_evaluate(gens, BasisProducer(counting), 30);
  if (counting.count() != 1) o.fail(std::to_string(counting.count()) + " basis constructions");
  for (std::size_t n = 0; n < gens.size(); ++n) {
    const auto report = converge(gens[n], discrete_producer(p, q), discrete_options(p, q, 30));
    if (values[n] != report.partial_sum(30)) o.fail(gens[n].name() + " differs from its single run");
  }
  const auto basis = chi_basis_discrete(p, q, 30);
  std::vector<double> again;
  const double ms = time_ms([&] { again = batch_evaluate(gens, basis); });
  if (again != values) o.fail("batch over a prebuilt basis differs");
  if (ms >= 1.0) o.fail("batch runtime " + str(ms) + " ms");
  if (o.pass) o.detail = "one basis construction, bit-for-bit, " + str(ms) + " ms";
  return o;
}

Outcome fisher() {
  Outcome o;
  const double lambda = 0.3;
  const double delta = 1e-4;
  const double limit = 1.0 / (2 * lambda * (1 - lambda));
  const auto p = DiscreteDistribution::bernoulli(lambda);
  const auto q = DiscreteDistribution::bernoulli(lambda + delta);
  const auto basis = chi_basis_discrete(p, q, 12);
  double worst = 0.0;
  for (const auto& g : {Generator::kl(), Generator::kl_reverse(), Generator::js(), Generator::jeffreys(),
                        Generator::exponential()}) {
    const auto s = g.standardized();
    const double ratio = chi_expansion(s, basis, 12) / (delta * delta);
    const double rel = std::abs(ratio - limit) / limit;
    worst = std::max(worst, rel);
    if (rel >= 0.01) o.fail(s.name() + " I_f / delta^2 = " + str(ratio));
  }
  std::string skipped;
  for (const auto& g : catalog()) {
    // The harmonic affinity is concave at 1 and has no standard form.
    if (g.coeff(2) < 0.0) {
      skipped += (skipped.empty() ? "" : ", ") + g.name();
      continue;
    }
    const auto s = g.standardized();
    const bool exact_half = s.has_exact_coeffs() ? s.exact_coeff(2) == Rational(1, 2) : true;
    if (!exact_half || std::abs(s.coeff(2) - 0.5) > 1e-15) o.fail(s.name() + " has c_2 = " + str(s.coeff(2)));
  }
  if (o.pass) o.detail = "worst relative gap " + str(worst) + ", c_2 = 1/2 across the convex catalog (concave: " + skipped + ")";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{
      gaussian_table, bernoulli_table, js_coefficient,  odd_alpha, remainder_certification, verdicts,
      truncated_exponential, oracle_triangle, odd_degeneracy, batch_scheme, fisher};
  int failures = 0;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    Outcome o;
    try {
      o = criteria[n]();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::printf("criterion %zu: %s  %s\n", n + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
