#pragma once

#include "fchi/bounds.hpp"
#include "fchi/chi.hpp"
#include "fchi/families.hpp"
#include "fchi/generators.hpp"

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fchi {

/// f(1) + sum_{i=2}^k c_i chi_i, accumulated in order with compensation.
/// The linear Taylor term is dropped since q - p integrates to zero.
double chi_expansion(const Generator& gen, const ChiBasis& basis, int k);

/// Lagrange remainder bound sup_[m,M] |f^(k+1)| / (k+1)! * B, where B is
/// chi_abs_k1 (the absolute chi of order k+1) when given and (M - m)^(k+1)
/// otherwise. Evaluated with logarithms so large k does not overflow.
Bound remainder_bound(const Generator& gen, int k, const RatioBounds& rb,
                      std::optional<double> chi_abs_k1 = std::nullopt);

enum class Verdict { converging, diverging, inconclusive };

std::string to_string(Verdict v);

struct ExpansionReport {
  std::string generator;
  std::optional<ChiBasis> basis;
  /// partial_sums[k - 2] = S_k for k = 2..K.
  std::vector<double> partial_sums;
  /// terms[i - 2] = c_i chi_i.
  std::vector<double> terms;
  /// remainder_bounds[k - 2], present when ratio bounds were supplied.
  std::optional<std::vector<Bound>> remainder_bounds;
  Verdict verdict = Verdict::inconclusive;
  std::optional<double> exact_value;
  /// Why the basis could not be produced, if it could not.
  std::optional<std::string> error;

  int max_order() const { return static_cast<int>(partial_sums.size()) + 1; }
  double partial_sum(int k) const { return partial_sums.at(k - 2); }
  double term(int i) const { return terms.at(i - 2); }
};

/// Produces chi_2..chi_{k_max} for one fixed distribution pair.
using BasisProducer = std::function<ChiBasis(int k_max)>;

struct ConvergeOptions {
  int k_max = 30;
  double tol = 1e-12;
  std::optional<RatioBounds> ratio_bounds;
  /// Absolute chi of a given order, used instead of (M - m)^(k+1).
  std::function<double(int)> chi_abs;
  std::optional<double> exact_value;
};

/// Verdict on a sequence of terms t_2..t_K and partial sums S_2..S_K.
///
/// diverging: |t| strictly increases over the last 5 orders and |t_K| > |t_2|,
/// or a term or partial sum is not finite.
/// converging: |t_k| < tol max(1, |S_k|) for the last 3 orders, or the last 3
/// magnitudes decrease with worst ratio rho < 1 and the geometric tail
/// estimate |t_K| rho / (1 - rho) is below tol max(1, |S_K|).
/// inconclusive otherwise.
Verdict classify(std::span<const double> terms, std::span<const double> partial_sums, double tol);

/// Requires k_max >= 4. A failure of the producer is recorded in
/// report.error with verdict diverging.
ExpansionReport converge(const Generator& gen, const BasisProducer& producer, const ConvergeOptions& opts);

/// chi_expansion(gens[n], basis, basis.max_order()) for every n.
std::vector<double> batch_evaluate(std::span<const Generator> gens, const ChiBasis& basis);
/// Builds the basis once with the producer, then evaluates every generator.
std::vector<double> batch_evaluate(std::span<const Generator> gens, const BasisProducer& producer, int k_max);

/// Wraps a producer and counts how many bases it has built. Copies share the
/// counter, which is safe to read concurrently.
class CountingBasisProducer {
 public:
  explicit CountingBasisProducer(BasisProducer inner)
      : inner_(std::move(inner)), count_(std::make_shared<std::atomic<int>>(0)) {}

  ChiBasis operator()(int k_max) const {
    count_->fetch_add(1);
    return inner_(k_max);
  }
  int count() const { return count_->load(); }

 private:
  BasisProducer inner_;
  std::shared_ptr<std::atomic<int>> count_;
};

/// Finite expansion of the alpha-divergence with alpha = 2k - 1: the
/// generator is a polynomial of degree k, so orders 2..k are exact.
double alpha_odd_expansion(const AefFamily& fam, std::span<const double> theta_p,
                           std::span<const double> theta_q, int k);

}  // namespace fchi
