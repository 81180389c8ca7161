#include "cli/spec_file.hpp"

#include "fchi/errors.hpp"
#include "fchi/reference.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace fchi::cli {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("spec file lacks the field \"") + key + "\"");
  return j.at(key);
}

double as_real(const json& v, const char* what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
  throw InputError(std::string(what) + " must hold numbers");
}

// Exact value of a JSON number: the shortest decimal that reads back to the
// double, so 0.9 becomes 9/10. Strings such as "1/3" are parsed directly.
Rational as_rational(const json& v, const char* what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number()) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v.get<double>());
    return parse_rational(std::string_view(buf, ptr - buf));
  }
  throw InputError(std::string(what) + " must hold numbers");
}

std::vector<double> real_vector(const json& v, const char* what) {
  if (!v.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_real(e, what));
  return out;
}

AefFamily make_family(const json& j, std::size_t dim) {
  const std::string name = field(j, "family").get<std::string>();
  const int d = static_cast<int>(dim);
  if (name == "gaussian_iso") return AefFamily::gaussian_iso(d);
  if (name == "poisson") return AefFamily::poisson();
  if (name == "categorical") return AefFamily::categorical(d);
  if (name == "vmf") return AefFamily::vmf(d);
  if (name == "trunc_exp") {
    const double a = as_real(field(j, "a"), "a");
    std::optional<double> b;
    if (j.contains("b") && !j.at("b").is_null()) b = as_real(j.at("b"), "b");
    return AefFamily::trunc_exp(a, b);
  }
  throw InputError("unknown family \"" + name + "\"");
}

}  // namespace

PairSpec parse_pair_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("spec file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("spec file must hold a JSON object");
  try {
    PairSpec spec;
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "discrete") {
      spec.kind = PairKind::discrete;
      spec.p = DiscreteDistribution(real_vector(field(j, "p"), "p"));
      spec.q = DiscreteDistribution(real_vector(field(j, "q"), "q"));
      if (spec.p->size() != spec.q->size()) throw InputError("p and q have different lengths");
      for (const auto& v : field(j, "p")) spec.p_exact.push_back(as_rational(v, "p"));
      for (const auto& v : field(j, "q")) spec.q_exact.push_back(as_rational(v, "q"));
      return spec;
    }
    if (kind == "aef" || kind == "mixture") {
      spec.theta_p = real_vector(field(j, "theta_p"), "theta_p");
      spec.family = make_family(j, spec.theta_p.size());
      spec.family->check_domain(spec.theta_p);
      if (kind == "aef") {
        spec.kind = PairKind::aef;
        spec.theta_q = real_vector(field(j, "theta_q"), "theta_q");
        spec.family->check_domain(spec.theta_q);
        return spec;
      }
      spec.kind = PairKind::mixture;
      MixtureSpec mix;
      mix.weights = real_vector(field(j, "weights"), "weights");
      const json& thetas = field(j, "thetas");
      if (!thetas.is_array()) throw InputError("thetas must be an array of parameter arrays");
      for (const auto& t : thetas) mix.thetas.push_back(real_vector(t, "thetas"));
      mix.validate(*spec.family);
      spec.mixture = std::move(mix);
      return spec;
    }
    throw InputError("unknown spec kind \"" + kind + "\"");
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed spec file: ") + e.what());
  }
}

PairSpec load_pair_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open spec file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_pair_spec(buf.str());
}

double chi_value(const PairSpec& spec, int i, double lambda) {
  switch (spec.kind) {
    case PairKind::discrete:
      return chi_pm_discrete(*spec.p, *spec.q, i, lambda);
    case PairKind::aef:
      return chi_pm_aef(*spec.family, spec.theta_p, spec.theta_q, i, lambda);
    case PairKind::mixture:
      return chi_pm_mixture(*spec.family, spec.theta_p, *spec.mixture, i, lambda);
  }
  return 0.0;
}

ChiProvenance chi_backend(const PairSpec& spec) {
  return spec.kind == PairKind::discrete ? ChiProvenance::discrete_exact : ChiProvenance::aef_closed_form;
}

BasisProducer basis_producer(const PairSpec& spec) {
  return [spec](int k_max) -> ChiBasis {
    switch (spec.kind) {
      case PairKind::discrete:
        return chi_basis_discrete(*spec.p, *spec.q, k_max);
      case PairKind::aef:
        return chi_basis_aef(*spec.family, spec.theta_p, spec.theta_q, k_max);
      case PairKind::mixture:
        break;
    }
    return chi_basis_mixture(*spec.family, spec.theta_p, *spec.mixture, k_max);
  };
}

std::optional<RatioBounds> ratio_bounds(const PairSpec& spec) {
  switch (spec.kind) {
    case PairKind::discrete:
      return density_ratio_bounds(*spec.p, *spec.q);
    case PairKind::aef:
      return spec.family->density_ratio_bounds(spec.theta_p, spec.theta_q);
    case PairKind::mixture:
      break;
  }
  return std::nullopt;
}

std::function<double(int)> chi_abs_fn(const PairSpec& spec) {
  if (spec.kind != PairKind::discrete) return {};
  return [p = *spec.p, q = *spec.q](int s) { return chi_abs(p, q, s); };
}

std::optional<ExactValue> exact_value(const PairSpec& spec, const Generator& gen) {
  if (spec.kind == PairKind::discrete)
    return ExactValue{exact_f_divergence_discrete(gen, *spec.p, *spec.q), "discrete-exact"};
  if (spec.kind == PairKind::aef && gen.kind() == GeneratorKind::alpha)
    return ExactValue{exact_alpha_aef(*spec.family, spec.theta_p, spec.theta_q, gen.alpha_value()),
                      "aef-closed-form"};
  return std::nullopt;
}

}  // namespace fchi::cli
