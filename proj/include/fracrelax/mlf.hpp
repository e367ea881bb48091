#pragma once

// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) on the closed
// negative real axis, 0 < alpha <= 1, beta > 0.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <string_view>

#include "fracrelax/errors.hpp"
#include "fracrelax/gamma.hpp"
#include "fracrelax/mlf_constants.hpp"
#include "fracrelax/numeric.hpp"

namespace fracrelax {

struct MLQuery {
  double alpha = 1.0;
  double beta = 1.0;
  double z = 0.0;
};

enum class MLRegime { Zero, Series, Integral, ClosedForm, Asymptotic };

inline std::string_view to_string(MLRegime r) noexcept {
  switch (r) {
    case MLRegime::Zero: return "zero";
    case MLRegime::Series: return "series";
    case MLRegime::Integral: return "integral";
    case MLRegime::ClosedForm: return "closed-form";
    case MLRegime::Asymptotic: return "asymptotic";
  }
  return "unknown";
}

struct MLValue {
  double value = 0.0;
  MLRegime regime = MLRegime::Zero;
};

namespace detail {

inline void check_ml_query(const MLQuery& q) {
  if (!std::isfinite(q.alpha) || !(q.alpha > 0.0) || q.alpha > 1.0) {
    std::ostringstream os;
    os << "Mittag-Leffler: alpha must lie in (0, 1], got " << q.alpha;
    throw ParameterOutOfRange(os.str());
  }
  if (!std::isfinite(q.beta) || !(q.beta > 0.0)) {
    std::ostringstream os;
    os << "Mittag-Leffler: beta must be > 0, got " << q.beta;
    throw ParameterOutOfRange(os.str());
  }
  if (!std::isfinite(q.z) || q.z > 0.0) {
    std::ostringstream os;
    os << "Mittag-Leffler: z must be finite and <= 0, got " << q.z;
    throw ParameterOutOfRange(os.str());
  }
}

// sum_k (-x)^k / Gamma(alpha k + beta)
inline double ml_series(double alpha, double beta, double x) {
  const double w = std::pow(x, 1.0 / alpha);
  CompensatedSum sum;
  double xk = 1.0;
  double max_abs = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double term = xk * reciprocal_gamma(alpha * k + beta);
    const double signed_term = (k % 2 == 0) ? term : -term;
    sum.add(signed_term);
    max_abs = std::max(max_abs, std::fabs(term));
    // Terms decay monotonically once alpha k + beta is past the peak.
    if (alpha * k + beta > 2.0 + w) {
      if (term == 0.0) break;
      if (std::fabs(term) <= 1e-18 * max_abs &&
          std::fabs(term) <= 1e-18 * std::fabs(sum.value())) {
        break;
      }
    }
    xk *= x;
  }
  return sum.value();
}

// -sum_{j>=1} z^{-j} / Gamma(beta - j alpha), z = -x, truncated before the
// envelope x^{-j} Gamma(j alpha + 1 - beta) / pi starts to grow.
inline double ml_asymptotic(double alpha, double beta, double x) {
  CompensatedSum sum;
  const double log_x = std::log(x);
  double prev_env = std::numeric_limits<double>::infinity();
  double inv_zj = 1.0;
  for (int j = 1; j <= mlf_constants::kAsymptoticMaxTerms; ++j) {
    inv_zj *= -1.0 / x;
    const double arg = j * alpha + 1.0 - beta;
    if (arg > 1.0) {
      const double env = -j * log_x + std::lgamma(arg);
      if (env > prev_env) break;
      prev_env = env;
      if (env < std::log(1e-19) + std::log(std::fabs(sum.value()) + 1e-300)) {
        sum.add(-inv_zj * reciprocal_gamma(beta - j * alpha));
        break;
      }
    }
    if (inv_zj == 0.0) break;
    sum.add(-inv_zj * reciprocal_gamma(beta - j * alpha));
  }
  return sum.value();
}

// Spectral representation, valid for 0 < alpha < 1, beta < 1 + alpha:
// E(-x) = 1/pi int_0^inf e^{-u} u^{alpha-beta}
//         [u^alpha sin(pi(1-beta)) + x sin(pi(1-beta+alpha))]
//         / (u^{2 alpha} + 2 u^alpha x cos(pi alpha) + x^2) du
// Integrated in t = u^{1+alpha-beta}, which removes the endpoint singularity.
inline double ml_spectral_integral(double alpha, double beta, double x) {
  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::tanh_sinh;
  thread_local tanh_sinh<double> finite_rule(15);
  thread_local exp_sinh<double> half_line_rule(12);

  const double p = 1.0 / (1.0 + alpha - beta);
  const double sin_b = std::sin(M_PI * (1.0 - beta));
  const double sin_ab = std::sin(M_PI * (1.0 - beta + alpha));
  const double cos_a = std::cos(M_PI * alpha);
  const double xs = x * std::sin(M_PI * alpha);
  auto integrand = [=](double t) -> double {
    if (!(t > 0.0)) return 0.0;
    const double u = std::pow(t, p);
    if (u > 745.0) return 0.0;
    const double ua = std::pow(t, p * alpha);
    const double num = ua * sin_b + x * sin_ab;
    // (u^a + x cos)^2 + (x sin)^2 avoids cancellation near the peak.
    const double shifted = ua + x * cos_a;
    const double den = shifted * shifted + xs * xs;
    return p * std::exp(-u) * num / den;
  };

  // Split at the peak of the Lorentzian factor when alpha > 1/2; otherwise at
  // the natural scale x^(1/alpha).
  double split_u = std::pow(x, 1.0 / alpha);
  if (cos_a < 0.0) split_u = std::pow(-x * cos_a, 1.0 / alpha);
  const double split = std::max(std::pow(split_u, 1.0 / p), 1e-6);

  const double tol = mlf_constants::kQuadratureTol;
  double err = 0.0;
  const double left = finite_rule.integrate(integrand, 0.0, split, tol, &err);
  const double right = half_line_rule.integrate(
      [&](double t) { return integrand(t + split); }, tol, &err);
  return (left + right) / M_PI;
}

// alpha == 1
inline MLValue ml_unit_alpha(double beta, double x) {
  if (beta == 1.0) return {std::exp(-x), MLRegime::ClosedForm};
  if (x <= mlf_constants::kUnitSeriesMaxZ) {
    return {ml_series(1.0, beta, x), MLRegime::Series};
  }
  if (x >= mlf_constants::kUnitAsymptoticMinZ) {
    return {ml_asymptotic(1.0, beta, x), MLRegime::Asymptotic};
  }
  if (beta == std::floor(beta)) {
    // (-x)^{1-m} [e^{-x} - sum_{k<=m-2} (-x)^k / k!]
    const int m = static_cast<int>(beta);
    CompensatedSum s;
    s.add(std::exp(-x));
    double term = 1.0;
    for (int k = 0; k <= m - 2; ++k) {
      if (k > 0) term *= -x / k;
      s.add(-term);
    }
    return {s.value() * std::pow(-x, 1 - m), MLRegime::ClosedForm};
  }
  // E_{1,b}(-x) = 1/Gamma(b-1) int_0^1 e^{-x(1-t)} t^{b-2} dt for b > 1
  auto beta_gt_one = [x](double b) {
    using boost::math::quadrature::tanh_sinh;
    thread_local tanh_sinh<double> rule(15);
    double err = 0.0;
    const double v = rule.integrate(
        [=](double t) {
          if (!(t > 0.0)) return 0.0;
          return std::exp(-x * (1.0 - t)) * std::pow(t, b - 2.0);
        },
        0.0, 1.0, mlf_constants::kQuadratureTol, &err);
    return v * reciprocal_gamma(b - 1.0);
  };
  if (beta > 1.0) return {beta_gt_one(beta), MLRegime::Integral};
  // E_{1,b}(z) = 1/Gamma(b) + z E_{1,b+1}(z)
  return {reciprocal_gamma(beta) - x * beta_gt_one(beta + 1.0),
          MLRegime::Integral};
}

inline MLValue ml_fractional_alpha(double alpha, double beta, double x) {
  const double w = std::pow(x, 1.0 / alpha);
  if (w <= mlf_constants::kSeriesMaxW) {
    return {ml_series(alpha, beta, x), MLRegime::Series};
  }
  if (w >= mlf_constants::kAsymptoticMinW) {
    return {ml_asymptotic(alpha, beta, x), MLRegime::Asymptotic};
  }
  if (beta <= 1.0) {
    return {ml_spectral_integral(alpha, beta, x), MLRegime::Integral};
  }
  // E_{a,b}(-x) = (1/Gamma(b-a) - E_{a,b-a}(-x)) / x lowers beta into range.
  const MLValue lower = ml_fractional_alpha(alpha, beta - alpha, x);
  return {(reciprocal_gamma(beta - alpha) - lower.value) / x, lower.regime};
}

}  // namespace detail

/// E_{alpha,beta}(z) together with the evaluation regime that produced it.
inline MLValue eval_ml_detailed(const MLQuery& q) {
  detail::check_ml_query(q);
  const double x = -q.z;
  if (x == 0.0) return {reciprocal_gamma(q.beta), MLRegime::Zero};
  if (q.alpha == 1.0) return detail::ml_unit_alpha(q.beta, x);
  return detail::ml_fractional_alpha(q.alpha, q.beta, x);
}

inline double eval_ml(const MLQuery& q) { return eval_ml_detailed(q).value; }

inline double eval_ml(double alpha, double beta, double z) {
  return eval_ml_detailed({alpha, beta, z}).value;
}

/// Leading algebraic term -z^{-1}/Gamma(beta - alpha) of E_{alpha,beta}(z)
/// as z -> -infinity. Only meaningful for |z| >= 10.
inline double eval_ml_asymptotic_leading(const MLQuery& q) {
  detail::check_ml_query(q);
  if (std::fabs(q.z) < 10.0) {
    std::ostringstream os;
    os << "asymptotic leading term requires |z| >= 10, got " << q.z;
    throw ParameterOutOfRange(os.str());
  }
  return -reciprocal_gamma(q.beta - q.alpha) / q.z;
}

/// Parameters of h(x) = x^{gamma_w - 1} E_{alpha,beta}(-lambda x^alpha).
struct CMWeightedParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma_w = 1.0;
  double lambda = 1.0;
};

inline double eval_weighted(const CMWeightedParams& p, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << "eval_weighted: x must be > 0, got " << x;
    throw ParameterOutOfRange(os.str());
  }
  if (!(p.lambda > 0.0)) {
    throw ParameterOutOfRange("eval_weighted: lambda must be > 0");
  }
  const double ml = eval_ml(p.alpha, p.beta, -p.lambda * std::pow(x, p.alpha));
  return std::pow(x, p.gamma_w - 1.0) * ml;
}

/// The four inequalities under which h is completely monotone.
inline bool is_cm_params(const CMWeightedParams& p) noexcept {
  return p.alpha > 0.0 && p.alpha <= 1.0 && p.alpha <= p.beta &&
         p.gamma_w > 0.0 && p.gamma_w <= 1.0 && p.lambda > 0.0;
}

}  // namespace fracrelax
