#pragma once

#include <cmath>

namespace mlkit {

/// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays exact
/// when an addend is larger in magnitude than the running sum, which is the
/// normal situation in alternating series with a growing hump of terms.
template <typename Real>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Real init) : sum_(init) {}

  void add(Real value) {
    const Real t = sum_ + value;
    if (abs_(sum_) >= abs_(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(Real value) {
    add(value);
    return *this;
  }

  Real value() const { return sum_ + compensation_; }

 private:
  static Real abs_(Real v) { return v < Real(0) ? -v : v; }

  Real sum_ = Real(0);
  Real compensation_ = Real(0);
};

}  // namespace mlkit
