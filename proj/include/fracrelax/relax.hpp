#pragma once

// The relaxation equation D y = -lambda y with nth level derivative D:
// closed-form solution as a sum of weighted Mittag-Leffler terms, its
// power-law tail, complete-monotonicity checks and Laplace verification.

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fracrelax/errors.hpp"
#include "fracrelax/gamma.hpp"
#include "fracrelax/gridops.hpp"
#include "fracrelax/mlf.hpp"
#include "fracrelax/numeric.hpp"
#include "fracrelax/power_sum.hpp"
#include "fracrelax/specparams.hpp"

namespace fracrelax {

/// `y` holds one initial value per kernel exponent of the effective
/// (reduced) operator; for truly nth level types that is n values.
struct RelaxationProblem {
  DerivativeSpec spec;
  double lambda = 1.0;
  std::vector<double> y;
};

/// y_k x^{sigma_k} E_{alpha, sigma_k + 1}(-lambda x^alpha)
struct RelaxationTerm {
  double y = 0.0;
  double sigma = 0.0;
  double beta = 1.0;  // sigma + 1
};

struct RelaxationSolution {
  double alpha = 1.0;
  double lambda = 1.0;
  std::vector<RelaxationTerm> terms;

  CMWeightedParams weighted(const RelaxationTerm& t) const {
    return {alpha, t.beta, t.beta, lambda};
  }
};

struct CMViolation {
  int order = 0;
  double x = 0.0;
  double value = 0.0;  // (-1)^m Delta_h^m f(x)
};

struct CMReport {
  bool admissible_by_theorem = false;
  int numeric_orders_checked = 0;
  std::vector<CMViolation> violations;
  std::vector<std::string> reasons;
};

namespace detail {

inline DerivativeSpec effective_spec(const DerivativeSpec& spec) {
  return classify(spec).effective;
}

inline std::vector<double> effective_sigma(const DerivativeSpec& eff) {
  auto s = eff.sigma();
  for (double& v : s) {
    if (std::fabs(v) <= kParamTol) v = 0.0;
  }
  return s;
}

inline void check_initial_values(const DerivativeSpec& eff,
                                 const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != eff.n()) {
    std::ostringstream os;
    os << "expected " << eff.n() << " initial value(s) for the effective operator "
       << describe(eff) << ", got " << y.size();
    throw ValidationError(os.str());
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw ValidationError("initial values must be finite");
  }
}

inline void check_problem(const RelaxationProblem& p) {
  require_valid(p.spec);
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
    std::ostringstream os;
    os << "relaxation rate must satisfy lambda > 0, got " << p.lambda;
    throw ValidationError(os.str());
  }
  check_initial_values(effective_spec(p.spec), p.y);
}

}  // namespace detail

/// Solution of D y = 0 with the given initial values:
///   sum_k y_k x^{sigma_k} / Gamma(sigma_k + 1).
inline PowerSum solve_homogeneous(const DerivativeSpec& spec,
                                  const std::vector<double>& y) {
  const DerivativeSpec eff = detail::effective_spec(spec);
  detail::check_initial_values(eff, y);
  const auto sigma = detail::effective_sigma(eff);
  std::vector<PowerTerm> terms;
  for (std::size_t k = 0; k < y.size(); ++k) {
    terms.push_back({y[k] * reciprocal_gamma(sigma[k] + 1.0), sigma[k]});
  }
  return PowerSum(std::move(terms));
}

inline RelaxationSolution solve_relaxation(const RelaxationProblem& p) {
  detail::check_problem(p);
  const DerivativeSpec eff = detail::effective_spec(p.spec);
  const auto sigma = detail::effective_sigma(eff);
  RelaxationSolution sol;
  sol.alpha = eff.alpha();
  sol.lambda = p.lambda;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    sol.terms.push_back({p.y[k], sigma[k], sigma[k] + 1.0});
  }
  return sol;
}

inline double evaluate_solution(const RelaxationSolution& sol, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << "evaluate_solution: x must be > 0, got " << x;
    throw ValidationError(os.str());
  }
  CompensatedSum s;
  for (const auto& t : sol.terms) {
    if (t.y == 0.0) continue;
    s.add(t.y * eval_weighted(sol.weighted(t), x));
  }
  return s.value();
}

/// Leading power-law behaviour y ~ sum_k d_k x^{s_k - k} as x -> infinity,
/// with d_k = y_k / (lambda Gamma(s_k - k + 1)) from the leading asymptotic
/// term of each Mittag-Leffler factor.
inline AsymptoticForm asymptotic_form(const RelaxationProblem& p) {
  detail::check_problem(p);
  const DerivativeSpec eff = detail::effective_spec(p.spec);
  const auto sigma = detail::effective_sigma(eff);
  AsymptoticForm out;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const double e = sigma[k] - eff.alpha();  // s_k - k
    out.terms.push_back({p.y[k] * reciprocal_gamma(e + 1.0) / p.lambda, e});
  }
  return out;
}

/// Sufficient conditions for complete monotonicity: non-negative initial
/// values and k - 1 <= s_k for the effective operator.
inline CMReport cm_verdict(const RelaxationProblem& p) {
  detail::check_problem(p);
  const SpecClass c = classify(p.spec);
  const ValidationReport v = validate(c.effective);
  CMReport r;
  bool ok = true;
  for (std::size_t k = 0; k < p.y.size(); ++k) {
    if (p.y[k] < 0.0) {
      ok = false;
      std::ostringstream os;
      os << "initial value y_" << k + 1 << " = " << p.y[k] << " is negative";
      r.reasons.push_back(os.str());
    }
  }
  const auto s = c.effective.partial_sums();
  for (int k = 1; k <= c.effective.n(); ++k) {
    if (s[k - 1] < (k - 1) - kParamTol) {
      ok = false;
      std::ostringstream os;
      os << "s_" << k << " = " << s[k - 1] << " < " << k - 1;
      r.reasons.push_back(os.str());
    }
  }
  if (!v.truly_nth_level) {
    ok = false;
    r.reasons.push_back("effective operator is not truly of its level");
  }
  if (ok && c.reduced) r.reasons.push_back("reduced: " + c.notes);
  r.admissible_by_theorem = ok;
  return r;
}

/// Finite-difference test of complete monotonicity on a 400-point log grid:
/// (-1)^m Delta_h^m f(x) >= -tau * sum_j C(m,j) |f(x + j h)|, h = x / 64,
/// for m = 0..max_order.
inline CMReport cm_numeric_check(const std::function<double(double)>& f,
                                 double x_lo, double x_hi, int max_order,
                                 double tau = 1e-7, int points = 400) {
  if (!(x_lo > 0.0) || !(x_hi > x_lo)) {
    throw ValidationError("cm_numeric_check: need 0 < x_lo < x_hi");
  }
  if (max_order < 0 || max_order > 8) {
    throw ValidationError("cm_numeric_check: max order must lie in [0, 8]");
  }
  CMReport r;
  r.numeric_orders_checked = max_order;
  std::vector<double> binom(max_order + 1);
  std::vector<double> vals(max_order + 1);
  const double step = std::log(x_hi / x_lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double x = x_lo * std::exp(step * i);
    const double h = x / 64.0;
    for (int j = 0; j <= max_order; ++j) vals[j] = f(x + j * h);
    for (int m = 0; m <= max_order; ++m) {
      double diff = 0.0, scale = 0.0, c = 1.0;
      for (int j = 0; j <= m; ++j) {
        // c = C(m, j)
        const double sign = ((m - j) % 2 == 0) ? 1.0 : -1.0;
        diff += sign * c * vals[j];
        scale += c * std::fabs(vals[j]);
        c = c * (m - j) / (j + 1);
      }
      const double signed_diff = (m % 2 == 0) ? diff : -diff;
      if (signed_diff < -tau * scale) r.violations.push_back({m, x, signed_diff});
    }
  }
  return r;
}

struct LaplaceCheck {
  double s = 0.0;
  double numeric = 0.0;
  double closed_form = 0.0;
  double rel_error = 0.0;
};

/// Closed form  sum_k y_k s^{k - s_k - 1} / (s^alpha + lambda).
inline double laplace_closed_form(const RelaxationProblem& p, double s) {
  detail::check_problem(p);
  const DerivativeSpec eff = detail::effective_spec(p.spec);
  const auto sigma = detail::effective_sigma(eff);
  CompensatedSum acc;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    acc.add(p.y[k] * std::pow(s, eff.alpha() - sigma[k] - 1.0));
  }
  return acc.value() / (std::pow(s, eff.alpha()) + p.lambda);
}

/// Samples the solution on a graded grid over (0, x_max], integrates it
/// against e^{-st} with the asymptotic tail beyond x_max, and compares with
/// the closed form at each s.
inline std::vector<LaplaceCheck> laplace_verify(const RelaxationProblem& p,
                                                const std::vector<double>& s_values,
                                                double x_max = 60.0, int m = 8192) {
  detail::check_problem(p);
  for (double s : s_values) {
    if (!(s > 0.0)) throw ValidationError("laplace_verify: s values must be > 0");
  }
  const RelaxationSolution sol = solve_relaxation(p);
  std::vector<double> sig;
  std::optional<double> lead;
  for (const auto& t : sol.terms) {
    sig.push_back(t.sigma);
    if (t.y != 0.0) lead = lead ? std::min(*lead, t.sigma) : t.sigma;
  }
  const GradedGrid grid(x_max, m, GradedGrid::default_grading(sig));
  const SampledFunction f =
      sample(grid, [&](double x) { return evaluate_solution(sol, x); }, lead);
  const AsymptoticForm tail = asymptotic_form(p);
  std::vector<LaplaceCheck> out;
  for (double s : s_values) {
    LaplaceCheck c;
    c.s = s;
    c.numeric = laplace_numeric(f, tail, s);
    c.closed_form = laplace_closed_form(p, s);
    c.rel_error = std::fabs(c.numeric - c.closed_form) / std::fabs(c.closed_form);
    out.push_back(c);
  }
  return out;
}

}  // namespace fracrelax
