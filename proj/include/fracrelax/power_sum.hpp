#pragma once

// Finite power-law sums  f(x) = sum_j c_j x^{mu_j},  mu_j > -1.
//
// The Riemann-Liouville integral maps each monomial to a monomial,
//   I^a t^mu = Gamma(mu + 1) / Gamma(a + mu + 1) x^{a + mu},
// so the set is closed under fractional integration and (with the exponent
// guard in weak_derivative) under differentiation.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <vector>

#include "fracrelax/errors.hpp"
#include "fracrelax/gamma.hpp"
#include "fracrelax/numeric.hpp"

namespace fracrelax {

struct PowerTerm {
  double coeff = 0.0;
  double exponent = 0.0;
};

class PowerSum {
 public:
  /// Coefficients below this magnitude are dropped.
  static constexpr double kZeroCoeff = 1e-300;

  PowerSum() = default;
  PowerSum(std::initializer_list<PowerTerm> terms)
      : PowerSum(std::vector<PowerTerm>(terms)) {}
  explicit PowerSum(std::vector<PowerTerm> terms) : terms_(std::move(terms)) {
    normalize();
  }

  static PowerSum monomial(double coeff, double exponent) {
    return PowerSum({PowerTerm{coeff, exponent}});
  }
  static PowerSum constant(double c) { return monomial(c, 0.0); }

  const std::vector<PowerTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Smallest exponent; nullopt for the zero function.
  std::optional<double> min_exponent() const noexcept {
    if (terms_.empty()) return std::nullopt;
    return terms_.front().exponent;
  }

  /// Coefficient of x^mu (0 when absent).
  double coeff_of(double mu) const noexcept {
    for (const auto& t : terms_) {
      if (std::fabs(t.exponent - mu) <= kExponentTol) return t.coeff;
    }
    return 0.0;
  }

  /// Largest coefficient magnitude (0 for the zero function).
  double max_abs_coeff() const noexcept {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::fabs(t.coeff));
    return m;
  }

  PowerSum& operator+=(const PowerSum& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    normalize();
    return *this;
  }
  PowerSum& operator-=(const PowerSum& other) { return *this += other * -1.0; }
  PowerSum& operator*=(double s) {
    for (auto& t : terms_) t.coeff *= s;
    normalize();
    return *this;
  }
  friend PowerSum operator+(PowerSum a, const PowerSum& b) { return a += b; }
  friend PowerSum operator-(PowerSum a, const PowerSum& b) { return a -= b; }
  friend PowerSum operator*(PowerSum a, double s) { return a *= s; }
  friend PowerSum operator*(double s, PowerSum a) { return a *= s; }

 private:
  void normalize() {
    for (const auto& t : terms_) {
      if (!std::isfinite(t.coeff) || !std::isfinite(t.exponent)) {
        throw ValidationError("PowerSum: non-finite coefficient or exponent");
      }
    }
    for (auto& t : terms_) {
      if (std::fabs(t.exponent) <= kExponentTol) t.exponent = 0.0;
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const PowerTerm& a, const PowerTerm& b) {
                return a.exponent < b.exponent;
              });
    std::vector<PowerTerm> merged;
    merged.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!merged.empty() &&
          std::fabs(merged.back().exponent - t.exponent) <= kExponentTol) {
        merged.back().coeff += t.coeff;
      } else {
        merged.push_back(t);
      }
    }
    std::erase_if(merged, [](const PowerTerm& t) {
      return std::fabs(t.coeff) < kZeroCoeff;
    });
    for (const auto& t : merged) {
      if (!(t.exponent > -1.0)) {
        std::ostringstream os;
        os << "PowerSum: exponent " << t.exponent
           << " is not integrable at 0 (must be > -1)";
        throw ValidationError(os.str());
      }
    }
    terms_ = std::move(merged);
  }

  std::vector<PowerTerm> terms_;
};

/// sum c_j x^{mu_j} for x > 0.
inline double evaluate(const PowerSum& f, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << "PowerSum evaluate: x must be > 0, got " << x;
    throw ValidationError(os.str());
  }
  CompensatedSum s;
  for (const auto& t : f.terms()) s.add(t.coeff * std::pow(x, t.exponent));
  return s.value();
}

/// Riemann-Liouville integral of order >= 0 (order 0 is the identity).
inline PowerSum rl_integral(double order, const PowerSum& f) {
  if (!(order >= 0.0) || !std::isfinite(order)) {
    std::ostringstream os;
    os << "rl_integral: order must be >= 0, got " << order;
    throw ValidationError(os.str());
  }
  if (order == 0.0) return f;
  std::vector<PowerTerm> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) {
    const double ratio =
        gamma_fn(t.exponent + 1.0) * reciprocal_gamma(order + t.exponent + 1.0);
    out.push_back({t.coeff * ratio, t.exponent + order});
  }
  return PowerSum(std::move(out));
}

/// Termwise d/dx. Constants vanish; exponents in (-1, 0) would leave the
/// algebra and raise DerivativeLeavesAlgebra tagged with `stage`.
inline PowerSum weak_derivative(const PowerSum& f, int stage = 0) {
  std::vector<PowerTerm> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) {
    if (t.exponent == 0.0) continue;
    if (t.exponent < 0.0) {
      std::ostringstream os;
      os << "weak_derivative: term x^" << t.exponent
         << " differentiates to an exponent <= -1";
      if (stage > 0) os << " (stage " << stage << ")";
      throw DerivativeLeavesAlgebra(os.str(), stage);
    }
    out.push_back({t.coeff * t.exponent, t.exponent - 1.0});
  }
  return PowerSum(std::move(out));
}

/// f(0): the x^0 coefficient, 0 when every exponent is positive; undefined
/// when a negative exponent carries a nonzero coefficient.
inline double value_at_zero(const PowerSum& f) {
  double v = 0.0;
  for (const auto& t : f.terms()) {
    if (t.exponent < 0.0) {
      std::ostringstream os;
      os << "value at 0 undefined: term " << t.coeff << " x^" << t.exponent;
      throw EvaluationAtZeroUndefined(os.str());
    }
    if (t.exponent == 0.0) v = t.coeff;
  }
  return v;
}

/// Laplace transform sum_j c_j Gamma(mu_j + 1) / s^{mu_j + 1}, s > 0.
inline double laplace_transform(const PowerSum& f, double s) {
  if (!(s > 0.0)) throw ValidationError("laplace_transform: s must be > 0");
  CompensatedSum acc;
  for (const auto& t : f.terms()) {
    acc.add(t.coeff * gamma_fn(t.exponent + 1.0) * std::pow(s, -(t.exponent + 1.0)));
  }
  return acc.value();
}

}  // namespace fracrelax
