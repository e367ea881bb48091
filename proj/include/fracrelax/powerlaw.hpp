#pragma once

// The nth level derivative and its projector acting exactly on PowerSum.

#include <utility>
#include <vector>

#include "fracrelax/gamma.hpp"
#include "fracrelax/power_sum.hpp"
#include "fracrelax/specparams.hpp"

namespace fracrelax {

namespace detail {

// (I^{g_{k+1}} d/dx) ... (I^{g_n} d/dx) I^{n - alpha - s_n} f for k = n..0.
// stages[k] holds the composition with factors k+1..n applied (0-based k);
// stages[n] is the innermost integral alone and stages[0] is D f.
inline std::vector<PowerSum> derivative_stages(const DerivativeSpec& spec,
                                               const PowerSum& f) {
  const int n = spec.n();
  std::vector<PowerSum> stages(n + 1);
  stages[n] = rl_integral(spec.inner_order(), f);
  for (int k = n; k >= 1; --k) {
    const PowerSum d = weak_derivative(stages[k], k);
    stages[k - 1] = rl_integral(spec.gamma()[k - 1], d);
  }
  return stages;
}

}  // namespace detail

/// Exact image D^{alpha,(gamma)} f. Stage failures raise
/// DerivativeLeavesAlgebra carrying the factor index k.
inline PowerSum nth_level_derivative(const DerivativeSpec& spec,
                                     const PowerSum& f) {
  require_valid(spec);
  return detail::derivative_stages(spec, f).front();
}

struct ProjectorResult {
  ProjectorCoeffs coeffs;
  /// f - sum_k p_k x^{sigma_k}, which equals I^alpha D f.
  PowerSum remainder;
  /// sum_k p_k x^{sigma_k}
  PowerSum projection;
  /// Initial data a_k = p_k Gamma(sigma_k + 1), the values at 0 entering
  /// the Laplace transform of D f.
  std::vector<double> initial;
};

/// Projector coefficients
///   p_k = (prod_{i>k} (I^{g_i} d/dx) I^{n-alpha-s_n} f)(0) / Gamma(sigma_k + 1)
/// and the remainder of the second fundamental theorem. Coefficients of
/// kernel exponents removed by the level reduction are zero.
inline ProjectorResult projector_apply(const DerivativeSpec& spec,
                                       const PowerSum& f) {
  require_valid(spec);
  const SpecClass c = classify(spec);
  std::vector<bool> alive(spec.n(), false);
  for (int i : c.surviving) alive[i] = true;

  const auto stages = detail::derivative_stages(spec, f);
  ProjectorResult out;
  out.coeffs.sigma = spec.sigma();
  out.coeffs.p.assign(spec.n(), 0.0);
  std::vector<PowerTerm> kernel_part;
  for (int k = 1; k <= spec.n(); ++k) {
    // Stage index k holds the factors k+1..n applied to the inner integral.
    const double sigma = out.coeffs.sigma[k - 1];
    const double a = alive[k - 1] ? value_at_zero(stages[k]) : 0.0;
    const double pk = a * reciprocal_gamma(sigma + 1.0);
    out.coeffs.p[k - 1] = pk;
    out.initial.push_back(a);
    kernel_part.push_back({pk, sigma});
  }
  out.projection = PowerSum(std::move(kernel_part));
  out.remainder = f - out.projection;
  return out;
}

}  // namespace fracrelax
