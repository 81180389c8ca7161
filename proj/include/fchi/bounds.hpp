#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace fchi {

/// A nonnegative bound or supremum that may fail to be finite.
class Bound {
 public:
  static Bound finite(double value) { return Bound(value); }
  static Bound unbounded() { return Bound(std::numeric_limits<double>::infinity()); }

  bool bounded() const { return std::isfinite(value_); }
  /// +infinity when unbounded.
  double value() const { return value_; }

  friend bool operator==(const Bound&, const Bound&) = default;

 private:
  explicit Bound(double v) : value_(v) {}
  double value_;
};

/// Essential infimum m and supremum M of the density ratio q/p.
/// Invariant: 0 <= m <= 1 <= M, with M = +infinity when the ratio is unbounded.
struct RatioBounds {
  double m = 1.0;
  double M = 1.0;

  bool bounded() const { return std::isfinite(M); }
  double width() const { return M - m; }
};

/// Throws InputError unless 0 <= m <= 1 <= M.
void validate(const RatioBounds& rb);

}  // namespace fchi
