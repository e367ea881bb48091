#pragma once

#include <cmath>
#include <limits>
#include <sstream>

#include "fracrelax/errors.hpp"

namespace fracrelax {

namespace detail {

inline bool is_nonpositive_integer(double x) noexcept {
  return x <= 0.0 && x == std::floor(x);
}

}  // namespace detail

/// Real gamma function. Throws at the poles 0, -1, -2, ...
inline double gamma_fn(double x) {
  if (!std::isfinite(x)) {
    throw ParameterOutOfRange("gamma_fn: non-finite argument");
  }
  if (detail::is_nonpositive_integer(x)) {
    std::ostringstream os;
    os << "gamma_fn: pole at " << x;
    throw ParameterOutOfRange(os.str());
  }
  if (x < 0.5) {
    // Reflection keeps the relative error of negative arguments at the
    // level of sin(pi x) evaluated with exact argument reduction.
    const double s = std::sin(M_PI * (x - 2.0 * std::round(x / 2.0)));
    return M_PI / (s * std::tgamma(1.0 - x));
  }
  return std::tgamma(x);
}

/// 1/Gamma(x), defined everywhere; zero at the poles of Gamma.
inline double reciprocal_gamma(double x) noexcept {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (detail::is_nonpositive_integer(x)) return 0.0;
  if (x > 171.5) return 0.0;
  if (x < 0.5) {
    const double s = std::sin(M_PI * (x - 2.0 * std::round(x / 2.0)));
    return s * std::tgamma(1.0 - x) / M_PI;
  }
  return 1.0 / std::tgamma(x);
}

}  // namespace fracrelax
