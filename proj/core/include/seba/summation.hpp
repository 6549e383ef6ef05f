#pragma once

#include <cmath>
#include <complex>

namespace seba {

/// Neumaier-compensated accumulator over extended precision.
class CompensatedSum {
 public:
  void add(long double x) noexcept {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(long double x) noexcept {
    add(x);
    return *this;
  }
  long double value() const noexcept { return sum_ + carry_; }

 private:
  long double sum_ = 0.0L;
  long double carry_ = 0.0L;
};

class ComplexCompensatedSum {
 public:
  void add(std::complex<long double> z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
  }
  ComplexCompensatedSum& operator+=(std::complex<long double> z) noexcept {
    add(z);
    return *this;
  }
  std::complex<long double> value() const noexcept {
    return {re_.value(), im_.value()};
  }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace seba
