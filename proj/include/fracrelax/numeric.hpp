#pragma once

#include <cmath>
#include <span>

namespace fracrelax {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

/// Absolute tolerance used for parameter comparisons (gamma, alpha + s_k).
inline constexpr double kParamTol = 1e-12;

/// Exponents closer than this are considered equal.
inline constexpr double kExponentTol = 1e-12;

inline bool near(double a, double b, double tol = kParamTol) noexcept {
  return std::fabs(a - b) <= tol;
}

}  // namespace fracrelax
