#include "fchi/quadrature.hpp"

#include "fchi/errors.hpp"
#include "fchi/numeric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace fchi {

QuadratureResult integrate_interval(const std::function<double(double)>& f, double lo, double hi,
                                    std::span<const double> breaks, double rel_tol) {
  if (!(lo < hi)) throw InputError("integration interval must satisfy lo < hi");
  std::vector<double> pts{lo};
  for (double b : breaks)
    if (b > pts.back() && b < hi) pts.push_back(b);
  pts.push_back(hi);

  CompensatedSum value;
  double error = 0.0;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, pts[s], pts[s + 1], 20, rel_tol, &err);
    if (!std::isfinite(v)) throw DivergenceError("integrand is not integrable on the interval");
    value.add(v);
    error += err;
  }
  return {value.value(), error};
}

QuadratureResult sum_counts(const std::function<double(long)>& term,
                            const std::function<double(long, double)>& tail_bound,
                            double rel_tol, double abs_tol, long max_terms) {
  CompensatedSum sum;
  for (long x = 0; x < max_terms; ++x) {
    const double t = term(x);
    if (!std::isfinite(t)) throw DivergenceError("series term " + std::to_string(x) + " is not finite");
    sum.add(t);
    const double tail = tail_bound(x, t);
    if (tail <= std::max(rel_tol * std::abs(sum.value()), abs_tol)) return {sum.value(), tail};
  }
  throw DivergenceError("series did not reach its tail tolerance within " + std::to_string(max_terms) +
                        " terms");
}

}  // namespace fchi
