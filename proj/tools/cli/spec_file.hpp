#pragma once

#include "fchi/chi.hpp"
#include "fchi/expansion.hpp"
#include "fchi/families.hpp"
#include "fchi/generators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fchi::cli {

enum class PairKind { discrete, aef, mixture };

/// A distribution pair read from a JSON spec file.
struct PairSpec {
  PairKind kind = PairKind::discrete;
  std::optional<DiscreteDistribution> p;
  std::optional<DiscreteDistribution> q;
  /// Exact probabilities, read from the decimal text of each entry.
  std::vector<Rational> p_exact;
  std::vector<Rational> q_exact;
  std::optional<AefFamily> family;
  Param theta_p;
  Param theta_q;
  std::optional<MixtureSpec> mixture;
};

/// Throws InputError on malformed JSON or invalid parameters.
PairSpec parse_pair_spec(const std::string& json_text);
PairSpec load_pair_spec(const std::string& path);

/// chi_{i,lambda} by the backend matching the spec kind.
double chi_value(const PairSpec& spec, int i, double lambda);
ChiProvenance chi_backend(const PairSpec& spec);
BasisProducer basis_producer(const PairSpec& spec);

/// Density ratio bounds when they are available for the spec kind.
std::optional<RatioBounds> ratio_bounds(const PairSpec& spec);
/// Absolute chi of a given order when it is computable exactly.
std::function<double(int)> chi_abs_fn(const PairSpec& spec);

struct ExactValue {
  double value;
  std::string backend;
};

/// Exact divergence when an exact backend exists: the discrete sum, or the
/// closed form of an alpha-divergence between family members.
std::optional<ExactValue> exact_value(const PairSpec& spec, const Generator& gen);

}  // namespace fchi::cli
