#include "cli/commands.hpp"

#include "cli/format.hpp"
#include "cli/spec_file.hpp"
#include "fchi/errors.hpp"
#include "fchi/reference.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>

namespace fchi::cli {

namespace {

constexpr int kDefaultMaxOrder = 64;

int max_order() {
  const char* env = std::getenv("FCHI_MAX_ORDER");
  if (env == nullptr || *env == '\0') return kDefaultMaxOrder;
  int v = 0;
  const std::string_view s(env);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 2)
    throw InputError("FCHI_MAX_ORDER must be an integer >= 2");
  return v;
}

void check_order_cap(int k) {
  const int cap = max_order();
  if (k > cap)
    throw InputError("order " + std::to_string(k) + " exceeds FCHI_MAX_ORDER = " + std::to_string(cap));
}

std::pair<int, int> parse_orders(const std::string& text) {
  auto to_int = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("malformed --orders: " + text);
    return v;
  };
  const auto dots = text.find("..");
  const int lo = to_int(std::string_view(text).substr(0, dots));
  const int hi = dots == std::string::npos ? lo : to_int(std::string_view(text).substr(dots + 2));
  if (lo < 2 || hi < lo) throw InputError("--orders needs 2 <= i_min <= i_max");
  return {lo, hi};
}

bool is_number(const std::string& s) {
  try {
    parse_rational(s);
    return true;
  } catch (const InputError&) {
    return false;
  }
}

struct ChiArgs {
  std::string spec;
  std::string orders = "2..10";
  std::string lambda = "1";
  std::string format = "csv";
  bool rational = false;
};

struct ExpandArgs {
  std::string spec;
  std::string divergence;
  int k = 10;
  bool with_remainder = false;
  std::string format = "csv";
  double tol = 1e-12;
  bool rational = false;
};

struct ExactArgs {
  std::string spec;
  std::string divergence;
  std::string format = "csv";
};

struct BatchArgs {
  std::string spec;
  std::string divergences;
  std::optional<int> k;
  std::string basis_out;
  std::string basis_in;
  std::string format = "csv";
};

int cmd_chi(const ChiArgs& a, std::ostream& out) {
  const PairSpec spec = load_pair_spec(a.spec);
  const auto [lo, hi] = parse_orders(a.orders);
  check_order_cap(hi);
  const Rational lambda_exact = parse_rational(a.lambda);
  const double lambda = to_double(lambda_exact);
  if (a.rational && spec.kind != PairKind::discrete)
    throw InputError("--rational needs a discrete spec");
  const std::string backend = to_string(chi_backend(spec));

  std::vector<std::string> cells;
  for (int i = lo; i <= hi; ++i) {
    if (a.rational) {
      cells.push_back(to_string(chi_pm_discrete_exact<Rational>(spec.p_exact, spec.q_exact, i, lambda_exact)));
    } else {
      cells.push_back(format_double(chi_value(spec, i, lambda)));
    }
  }
  if (a.format == "json") {
    out << "{\"backend\":" << json_string(backend) << ",\"lambda\":" << json_string(a.lambda) << ",\"chi\":[";
    for (int i = lo; i <= hi; ++i) {
      const std::string& c = cells[i - lo];
      const bool quoted = a.rational || c == "inf" || c == "-inf" || c == "nan";
      out << (i > lo ? "," : "") << "{\"order\":" << i << ",\"chi_pm\":" << (quoted ? json_string(c) : c) << "}";
    }
    out << "]}\n";
    return kOk;
  }
  out << "order,chi_pm,provenance\n";
  for (int i = lo; i <= hi; ++i) out << i << ',' << cells[i - lo] << ',' << backend << '\n';
  return kOk;
}

int cmd_expand(const ExpandArgs& a, std::ostream& out, std::ostream& err) {
  const PairSpec spec = load_pair_spec(a.spec);
  const Generator gen = Generator::parse(a.divergence);
  if (a.k < 2) throw InputError("-k must be >= 2");
  check_order_cap(a.k);
  if (a.rational && !gen.has_exact_coeffs())
    throw InputError(gen.name() + " has no exact rational coefficients");

  // Build the basis here so that divergence and overflow reach the exit code.
  const ChiBasis basis = basis_producer(spec)(a.k);
  const auto exact = exact_value(spec, gen);

  std::vector<double> terms;
  std::vector<double> sums;
  Verdict verdict = Verdict::inconclusive;
  std::optional<std::vector<Bound>> bounds;
  const std::optional<RatioBounds> rb = a.with_remainder ? ratio_bounds(spec) : std::nullopt;
  if (a.k >= 4) {
    ConvergeOptions opts;
    opts.k_max = a.k;
    opts.tol = a.tol;
    opts.ratio_bounds = rb;
    opts.chi_abs = chi_abs_fn(spec);
    if (exact) opts.exact_value = exact->value;
    const auto report = converge(gen, [&basis](int) { return basis; }, opts);
    terms = report.terms;
    sums = report.partial_sums;
    verdict = report.verdict;
    bounds = report.remainder_bounds;
  } else {
    const auto c = gen.coeffs(a.k);
    for (int k = 2; k <= a.k; ++k) {
      terms.push_back(c[k - 2] == 0.0 ? 0.0 : c[k - 2] * basis[k]);
      sums.push_back(chi_expansion(gen, basis, k));
    }
    if (rb) {
      bounds.emplace();
      auto abs_fn = chi_abs_fn(spec);
      for (int k = 2; k <= a.k; ++k)
        bounds->push_back(remainder_bound(gen, k, *rb, abs_fn ? std::optional<double>(abs_fn(k + 1)) : std::nullopt));
    }
  }
  auto bound_at = [&](int k) -> std::optional<Bound> {
    if (!a.with_remainder) return std::nullopt;
    if (!bounds) return Bound::unbounded();
    return (*bounds)[k - 2];
  };
  std::vector<Rational> coeffs;
  if (a.rational)
    for (int k = 2; k <= a.k; ++k) coeffs.push_back(gen.exact_coeff(k));

  if (a.format == "json") {
    out << "{\"divergence\":" << json_string(gen.name()) << ",\"backend\":" << json_string(to_string(basis.provenance()))
        << ",\"verdict\":" << json_string(to_string(verdict));
    if (exact) out << ",\"exact_value\":" << json_number(exact->value);
    out << ",\"rows\":[";
    for (int k = 2; k <= a.k; ++k) {
      out << (k > 2 ? "," : "") << "{\"k\":" << k << ",\"term\":" << json_number(terms[k - 2])
          << ",\"partial_sum\":" << json_number(sums[k - 2]);
      if (auto b = bound_at(k)) out << ",\"remainder_bound\":" << bound_json(*b);
      if (exact) out << ",\"abs_error\":" << json_number(std::abs(sums[k - 2] - exact->value));
      if (a.rational) out << ",\"coeff\":" << json_string(to_string(coeffs[k - 2]));
      out << "}";
    }
    out << "]}\n";
    return kOk;
  }
  out << "k,term,partial_sum,remainder_bound" << (exact ? ",abs_error" : "") << (a.rational ? ",coeff" : "") << '\n';
  for (int k = 2; k <= a.k; ++k) {
    const auto b = bound_at(k);
    out << k << ',' << format_double(terms[k - 2]) << ',' << format_double(sums[k - 2]) << ','
        << (b ? bound_text(*b) : "-");
    if (exact) out << ',' << format_double(std::abs(sums[k - 2] - exact->value));
    if (a.rational) out << ',' << to_string(coeffs[k - 2]);
    out << '\n';
  }
  err << "verdict: " << to_string(verdict) << '\n';
  return kOk;
}

int cmd_exact(const ExactArgs& a, std::ostream& out) {
  const PairSpec spec = load_pair_spec(a.spec);
  const Generator gen = Generator::parse(a.divergence);
  auto exact = exact_value(spec, gen);
  if (!exact) {
    if (spec.kind != PairKind::aef || !spec.family->has_density())
      throw InputError("no exact or numerical backend for " + gen.name() + " on this spec");
    exact = ExactValue{quadrature_f_divergence(gen, *spec.family, spec.theta_p, spec.theta_q).value, "quadrature"};
  }
  if (a.format == "json") {
    out << "{\"divergence\":" << json_string(gen.name()) << ",\"value\":" << json_number(exact->value)
        << ",\"backend\":" << json_string(exact->backend) << "}\n";
    return kOk;
  }
  out << "divergence,value,backend\n" << gen.name() << ',' << format_double(exact->value) << ',' << exact->backend << '\n';
  return kOk;
}

int cmd_batch(const BatchArgs& a, std::ostream& out) {
  std::vector<Generator> gens;
  for (const auto& g : split_generator_list(a.divergences)) gens.push_back(Generator::parse(g));

  std::optional<ChiBasis> basis;
  if (!a.basis_in.empty()) {
    std::ifstream in(a.basis_in);
    if (!in) throw InputError("cannot open basis file " + a.basis_in);
    basis = read_basis_csv(in);
  } else {
    if (a.spec.empty()) throw InputError("batch needs a spec file or --basis-in");
    const int k = a.k.value_or(10);
    if (k < 2) throw InputError("-k must be >= 2");
    check_order_cap(k);
    basis = basis_producer(load_pair_spec(a.spec))(k);
  }
  const int k = a.k.value_or(basis->max_order());
  if (k < 2 || k > basis->max_order())
    throw InputError("-k must lie in 2.." + std::to_string(basis->max_order()) + " for this basis");
  check_order_cap(k);
  if (!a.basis_out.empty()) {
    std::ofstream f(a.basis_out);
    if (!f) throw InputError("cannot write basis file " + a.basis_out);
    write_basis_csv(f, *basis);
  }

  std::vector<double> values;
  for (const auto& g : gens) values.push_back(chi_expansion(g, *basis, k));
  if (a.format == "json") {
    out << "{\"k\":" << k << ",\"results\":[";
    for (std::size_t n = 0; n < gens.size(); ++n)
      out << (n ? "," : "") << "{\"divergence\":" << json_string(gens[n].name())
          << ",\"value\":" << json_number(values[n]) << "}";
    out << "]}\n";
    return kOk;
  }
  out << "divergence,value\n";
  for (std::size_t n = 0; n < gens.size(); ++n) out << gens[n].name() << ',' << format_double(values[n]) << '\n';
  return kOk;
}

}  // namespace

std::vector<std::string> split_generator_list(const std::string& text) {
  std::vector<std::string> out;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    if (!out.empty() && out.back().rfind("poly:", 0) == 0 && is_number(token)) {
      out.back() += "," + token;
    } else {
      out.push_back(token);
    }
  }
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Power chi expansions of f-divergences", "fchi"};
  app.require_subcommand(1);
  const auto formats = CLI::IsMember({"csv", "json"});

  ChiArgs chi;
  auto* sc_chi = app.add_subcommand("chi", "chi_i values of a distribution pair");
  sc_chi->add_option("spec", chi.spec, "distribution spec file (JSON)")->required();
  sc_chi->add_option("--orders", chi.orders, "order range i_min..i_max");
  sc_chi->add_option("--lambda", chi.lambda, "lambda in (q - lambda p)^i");
  sc_chi->add_option("--format", chi.format)->check(formats);
  sc_chi->add_flag("--rational", chi.rational, "exact rational values (discrete specs)");

  ExpandArgs ex;
  auto* sc_ex = app.add_subcommand("expand", "chi expansion of one divergence, order by order");
  sc_ex->add_option("spec", ex.spec, "distribution spec file (JSON)")->required();
  sc_ex->add_option("--divergence", ex.divergence, "generator spec")->required();
  sc_ex->add_option("-k", ex.k, "expansion order K");
  sc_ex->add_flag("--with-remainder", ex.with_remainder, "add the remainder bound column");
  sc_ex->add_option("--format", ex.format)->check(formats);
  sc_ex->add_option("--tol", ex.tol, "convergence tolerance");
  sc_ex->add_flag("--rational", ex.rational, "add exact rational coefficients");

  ExactArgs exact;
  auto* sc_exact = app.add_subcommand("exact", "exact or numerical value of one divergence");
  sc_exact->add_option("spec", exact.spec, "distribution spec file (JSON)")->required();
  sc_exact->add_option("--divergence", exact.divergence, "generator spec")->required();
  sc_exact->add_option("--format", exact.format)->check(formats);

  BatchArgs batch;
  auto* sc_batch = app.add_subcommand("batch", "many divergences from one chi basis");
  sc_batch->add_option("spec", batch.spec, "distribution spec file (JSON)");
  sc_batch->add_option("--divergences", batch.divergences, "comma-separated generator specs");
  sc_batch->add_option("-k", batch.k, "expansion order K");
  sc_batch->add_option("--basis-out", batch.basis_out, "write the chi basis as CSV");
  sc_batch->add_option("--basis-in", batch.basis_in, "reuse a chi basis CSV");
  sc_batch->add_option("--format", batch.format)->check(formats);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (sc_chi->parsed()) return cmd_chi(chi, out);
    if (sc_ex->parsed()) return cmd_expand(ex, out, err);
    if (sc_exact->parsed()) return cmd_exact(exact, out);
    if (sc_batch->parsed()) return cmd_batch(batch, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const OverflowError& e) {
    err << "overflow: " << e.what() << '\n';
    return kOverflow;
  }
  return kInputError;
}

}  // namespace fchi::cli
