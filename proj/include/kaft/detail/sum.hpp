#pragma once

#include <cmath>
#include <complex>

namespace kaft::detail {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    abs_ += std::fabs(x);
  }
  double value() const { return sum_ + comp_; }
  // Sum of magnitudes; measures cancellation.
  double magnitude() const { return abs_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_ = 0.0;
};

template <class T>
struct Accumulator;

template <>
struct Accumulator<double> {
  CompensatedSum s;
  void add(double x) { s.add(x); }
  double value() const { return s.value(); }
};

template <>
struct Accumulator<std::complex<double>> {
  CompensatedSum re, im;
  void add(std::complex<double> x) {
    re.add(x.real());
    im.add(x.imag());
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

inline double magnitude(double x) { return std::fabs(x); }
inline double magnitude(std::complex<double> x) { return std::abs(x); }

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(std::complex<double> x) {
  return std::isfinite(x.real()) && std::isfinite(x.imag());
}

}  // namespace kaft::detail
