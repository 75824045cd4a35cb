#pragma once

#include <cmath>

namespace netsample {

/// Double-double accumulator. Sums of up to millions of terms are carried to
/// roughly 106 bits, so ratios of two such sums round as if computed
/// exactly. The estimators rely on this for the binary complement identity
/// mu(y) + mu(1 - y) == 1.
class CompensatedSum {
 public:
  CompensatedSum() = default;

  void add(double x) noexcept {
    const double s = hi_ + x;
    const double bb = s - hi_;
    const double err = (hi_ - (s - bb)) + (x - bb);
    renormalize(s, lo_ + err);
  }

  /// Adds a*b without rounding the product.
  void add_product(double a, double b) noexcept {
    const double p = a * b;
    const double perr = std::fma(a, b, -p);
    add(p);
    lo_ += perr;
    renormalize(hi_, lo_);
  }

  double hi() const noexcept { return hi_; }
  double lo() const noexcept { return lo_; }
  double value() const noexcept { return hi_ + lo_; }

  /// num / den rounded once to double.
  friend double divide(const CompensatedSum& num, const CompensatedSum& den) noexcept {
    const double q1 = num.hi_ / den.hi_;
    // r = num - q1 * den, carried in double-double
    const double p = q1 * den.hi_;
    const double perr = std::fma(q1, den.hi_, -p) + q1 * den.lo_;
    CompensatedSum r = num;
    r.add(-p);
    r.add(-perr);
    const double q2 = r.value() / den.hi_;
    return q1 + q2;
  }

 private:
  void renormalize(double a, double b) noexcept {
    hi_ = a + b;
    lo_ = b - (hi_ - a);
  }

  double hi_ = 0.0;
  double lo_ = 0.0;
};

}  // namespace netsample
