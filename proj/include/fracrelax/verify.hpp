#pragma once

// Seeded property suites: ftfc, kernel, projector, laplace, picard, cm.
// Each report lists every parameter draw so a failure can be replayed
// without the generator.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fracrelax/errors.hpp"
#include "fracrelax/io.hpp"
#include "fracrelax/powerlaw.hpp"
#include "fracrelax/relax.hpp"
#include "fracrelax/rng.hpp"
#include "fracrelax/specparams.hpp"
#include "fracrelax/volterra.hpp"

namespace fracrelax {

struct SuiteOptions {
  int trials = 100;
  std::uint64_t seed = 7;
  /// Grid size for the picard suite.
  int points = 1024;
};

struct SuiteReport {
  std::string suite;
  int trials = 0;
  int failures = 0;
  Json json;
};

/// Truly nth level type: kernel exponents drawn strictly decreasing in
/// (-1, 0]. With `cm_admissible` they are kept >= alpha - 1, which is
/// k - 1 <= s_k.
inline DerivativeSpec random_truly_spec(Rng& rng, int n, bool cm_admissible = false,
                                        double alpha = -1.0) {
  if (alpha <= 0.0) alpha = rng.uniform(0.05, 1.0);
  const double floor = cm_admissible ? alpha - 1.0 : -1.0;
  std::vector<double> sigma(n);
  sigma[0] = rng.uniform(alpha - 1.0, 0.0);
  for (int k = 1; k < n; ++k) {
    sigma[k] = floor + rng.uniform(0.02, 0.98) * (sigma[k - 1] - floor);
  }
  std::vector<double> gamma(n);
  gamma[0] = std::max(0.0, sigma[0] + 1.0 - alpha);
  for (int k = 1; k < n; ++k) gamma[k] = sigma[k] - sigma[k - 1] + 1.0;
  return DerivativeSpec(alpha, gamma);
}

/// Any type satisfying 0 <= gamma_k and alpha + s_k <= k (degenerate ones
/// included).
inline DerivativeSpec random_valid_spec(Rng& rng, int n) {
  const double alpha = rng.uniform(0.05, 1.0);
  std::vector<double> gamma(n);
  double s = 0.0;
  for (int k = 1; k <= n; ++k) {
    gamma[k - 1] = rng.uniform(0.0, k - alpha - s);
    s += gamma[k - 1];
  }
  return DerivativeSpec(alpha, gamma);
}

/// Uniform point of the triangle (0, 1), (1 - alpha, 1), (1 - alpha, alpha).
inline DerivativeSpec random_triangle_spec(Rng& rng, double alpha) {
  double u = rng.uniform(), v = rng.uniform();
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  const double g1 = u * (1.0 - alpha) + v * (1.0 - alpha);
  const double g2 = 1.0 + v * (alpha - 1.0);
  return DerivativeSpec(alpha, {g1, g2});
}

namespace detail {

inline double rel_coeff_error(const PowerSum& got, const PowerSum& want) {
  const PowerSum diff = got - want;
  const double scale = std::max(want.max_abs_coeff(), 1e-300);
  return diff.max_abs_coeff() / scale;
}

// Kernel part on surviving exponents plus a regular part with exponents in
// [0, 3], for which every value at 0 in the projector exists.
inline PowerSum random_projector_input(Rng& rng, const DerivativeSpec& spec) {
  std::vector<PowerTerm> terms;
  const auto sigma = spec.sigma();
  for (int i : classify(spec).surviving) {
    terms.push_back({rng.uniform(-2.0, 2.0), sigma[i]});
  }
  const int extra = rng.integer(1, 3);
  for (int j = 0; j < extra; ++j) {
    terms.push_back({rng.uniform(-2.0, 2.0), rng.uniform(0.0, 3.0)});
  }
  return PowerSum(std::move(terms));
}

inline void record(SuiteReport& r, Json draw, const std::string& failure) {
  if (!failure.empty()) {
    ++r.failures;
    r.json["failures"].push_back({{"trial", r.trials}, {"reason", failure}, {"draw", draw}});
  }
  r.json["draws"].push_back(std::move(draw));
  ++r.trials;
}

inline std::string fmt_err(const char* what, double err, double tol) {
  std::ostringstream os;
  os << what << " error " << err << " exceeds " << tol;
  return os.str();
}

}  // namespace detail

inline SuiteReport suite_ftfc(const SuiteOptions& o) {
  SuiteReport r{"ftfc", 0, 0, {}};
  Rng rng(o.seed);
  const double tol = 1e-10;
  for (int t = 0; t < o.trials; ++t) {
    const int n = rng.integer(1, 4);
    const DerivativeSpec spec =
        rng.uniform() < 0.5 ? random_truly_spec(rng, n) : random_valid_spec(rng, n);
    const double lo = std::max(-0.5, -spec.alpha()) + 1e-3;
    const PowerSum f = PowerSum::monomial(rng.uniform(0.5, 2.0) * (rng.uniform() < 0.5 ? -1 : 1),
                                          rng.uniform(lo, 3.0));
    Json draw{{"spec", to_json(spec)}, {"f", to_json(f)}};
    std::string failure;
    try {
      const PowerSum g = nth_level_derivative(spec, rl_integral(spec.alpha(), f));
      const double err = detail::rel_coeff_error(g, f);
      draw["error"] = err;
      if (!(err <= tol)) failure = detail::fmt_err("coefficient", err, tol);
    } catch (const Error& e) {
      failure = e.what();
    }
    detail::record(r, std::move(draw), failure);
  }
  return r;
}

inline SuiteReport suite_kernel(const SuiteOptions& o) {
  SuiteReport r{"kernel", 0, 0, {}};
  Rng rng(o.seed);
  const double tol = 1e-12;
  for (int t = 0; t < o.trials; ++t) {
    const DerivativeSpec spec = random_truly_spec(rng, rng.integer(1, 4));
    Json draw{{"spec", to_json(spec)}};
    std::string failure;
    try {
      const auto basis = kernel_basis(spec);
      if (static_cast<int>(basis.size()) != spec.n()) failure = "kernel dimension differs from n";
      double worst = 0.0;
      for (const auto& b : basis) {
        worst = std::max(worst, nth_level_derivative(spec, b).max_abs_coeff());
      }
      draw["max_coeff"] = worst;
      if (!(worst <= tol)) failure = detail::fmt_err("kernel image", worst, tol);
    } catch (const Error& e) {
      failure = e.what();
    }
    detail::record(r, std::move(draw), failure);
  }
  return r;
}

inline SuiteReport suite_projector(const SuiteOptions& o) {
  SuiteReport r{"projector", 0, 0, {}};
  Rng rng(o.seed);
  const double tol = 1e-10;
  for (int t = 0; t < o.trials; ++t) {
    const int n = rng.integer(1, 4);
    const DerivativeSpec spec =
        rng.uniform() < 0.5 ? random_truly_spec(rng, n) : random_valid_spec(rng, n);
    const PowerSum f = detail::random_projector_input(rng, spec);
    Json draw{{"spec", to_json(spec)}, {"f", to_json(f)}};
    std::string failure;
    try {
      const ProjectorResult pr = projector_apply(spec, f);
      const PowerSum lhs = rl_integral(spec.alpha(), nth_level_derivative(spec, f));
      const double err = (lhs - pr.remainder).max_abs_coeff() /
                         std::max(f.max_abs_coeff(), 1e-300);
      draw["p"] = pr.coeffs.p;
      draw["error"] = err;
      if (!(err <= tol)) failure = detail::fmt_err("remainder", err, tol);
    } catch (const Error& e) {
      failure = e.what();
    }
    detail::record(r, std::move(draw), failure);
  }
  return r;
}

/// Exact check of L[D f](s) = s^alpha F(s) - sum_k a_k s^{k - s_k - 1}.
inline SuiteReport suite_laplace(const SuiteOptions& o) {
  SuiteReport r{"laplace", 0, 0, {}};
  Rng rng(o.seed);
  const double tol = 1e-10;
  for (int t = 0; t < o.trials; ++t) {
    const DerivativeSpec spec = random_truly_spec(rng, rng.integer(1, 4));
    const PowerSum f = detail::random_projector_input(rng, spec);
    Json draw{{"spec", to_json(spec)}, {"f", to_json(f)}};
    std::string failure;
    try {
      const ProjectorResult pr = projector_apply(spec, f);
      const LaplaceForm form = laplace_form(spec, pr.initial);
      const PowerSum df = nth_level_derivative(spec, f);
      double worst = 0.0;
      for (double s : {0.5, 1.0, 2.0, 5.0}) {
        const double lhs = laplace_transform(df, s);
        const double rhs = form.apply(s, laplace_transform(f, s));
        const double scale = std::max({std::fabs(lhs), std::fabs(form.initial_part(s)),
                                       std::pow(s, spec.alpha()) *
                                           std::fabs(laplace_transform(f, s)),
                                       1e-300});
        worst = std::max(worst, std::fabs(lhs - rhs) / scale);
      }
      draw["error"] = worst;
      if (!(worst <= tol)) failure = detail::fmt_err("transform", worst, tol);
    } catch (const Error& e) {
      failure = e.what();
    }
    detail::record(r, std::move(draw), failure);
  }
  return r;
}

/// Picard iterate for F = -lambda y against the closed form on [0.1, 5].
inline SuiteReport suite_picard(const SuiteOptions& o) {
  SuiteReport r{"picard", 0, 0, {}};
  Rng rng(o.seed);
  const double tol = o.points >= 4096 ? 1e-5 : 1e-4;
  for (int t = 0; t < o.trials; ++t) {
    const double alpha = rng.uniform(0.2, 1.0);
    const DerivativeSpec spec = random_triangle_spec(rng, alpha);
    const double lambda = rng.uniform(0.5, 2.0);
    std::vector<double> y;
    for (int k = 0; k < classify(spec).effective.n(); ++k) y.push_back(rng.uniform(0.0, 2.0));
    Json draw{{"spec", to_json(spec)}, {"lambda", lambda}, {"y", y}};
    std::string failure;
    try {
      const auto sigma = classify(spec).effective.sigma();
      const GradedGrid grid(5.0, o.points, GradedGrid::default_grading(sigma));
      const double l = lambda;
      const VolterraProblem vp{spec, [l](double, double v) { return -l * v; }, y, grid,
                               1e-13, 2000};
      const PicardResult pr = picard_solve(vp);
      const RelaxationSolution sol = solve_relaxation({spec, lambda, y});
      double num = 0.0, den = 0.0;
      for (int i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.1) continue;
        const double ex = evaluate_solution(sol, grid[i]);
        num = std::max(num, std::fabs(ex - pr.solution.values[i]));
        den = std::max(den, std::fabs(ex));
      }
      const double err = den > 0.0 ? num / den : num;
      draw["iterations"] = pr.iterations;
      draw["error"] = err;
      if (!(err <= tol)) failure = detail::fmt_err("sup-norm relative", err, tol);
    } catch (const Error& e) {
      failure = e.what();
    }
    detail::record(r, std::move(draw), failure);
  }
  return r;
}

/// Admissible types (triangle points for n = 2, analogs for n = 3) with
/// non-negative initial values must show no finite-difference sign
/// violations up to order 6 on [1e-2, 1e3].
inline SuiteReport suite_cm(const SuiteOptions& o) {
  SuiteReport r{"cm", 0, 0, {}};
  Rng rng(o.seed);
  for (int t = 0; t < o.trials; ++t) {
    const double alpha = rng.uniform(0.1, 1.0);
    const DerivativeSpec spec = (t % 5 == 4) ? random_truly_spec(rng, 3, true, alpha)
                                             : random_triangle_spec(rng, alpha);
    const double lambda = rng.uniform(0.2, 3.0);
    std::vector<double> y;
    for (int k = 0; k < classify(spec).effective.n(); ++k) y.push_back(rng.uniform(0.0, 2.0));
    Json draw{{"spec", to_json(spec)}, {"lambda", lambda}, {"y", y}};
    std::string failure;
    try {
      const RelaxationProblem p{spec, lambda, y};
      const CMReport verdict = cm_verdict(p);
      if (!verdict.admissible_by_theorem) {
        failure = "draw is not admissible by the theorem";
      } else {
        const RelaxationSolution sol = solve_relaxation(p);
        const CMReport num = cm_numeric_check(
            [&](double x) { return evaluate_solution(sol, x); }, 1e-2, 1e3, 6);
        draw["violations"] = num.violations.size();
        if (!num.violations.empty()) {
          std::ostringstream os;
          os << num.violations.size() << " violation(s), first at order "
             << num.violations.front().order << ", x = " << num.violations.front().x;
          failure = os.str();
        }
      }
    } catch (const Error& e) {
      failure = e.what();
    }
    detail::record(r, std::move(draw), failure);
  }
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"ftfc", "projector", "kernel",
                                              "laplace", "picard", "cm"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, const SuiteOptions& o) {
  SuiteReport r;
  if (name == "ftfc") r = suite_ftfc(o);
  else if (name == "projector") r = suite_projector(o);
  else if (name == "kernel") r = suite_kernel(o);
  else if (name == "laplace") r = suite_laplace(o);
  else if (name == "picard") r = suite_picard(o);
  else if (name == "cm") r = suite_cm(o);
  else throw ValidationError("unknown suite '" + name + "'");
  Json out{{"suite", r.suite},
           {"seed", o.seed},
           {"generator", "mt19937_64, u = (r >> 11) * 2^-53"},
           {"trials", r.trials},
           {"failures", r.json.contains("failures") ? r.json["failures"] : Json::array()},
           {"draws", r.json.contains("draws") ? r.json["draws"] : Json::array()}};
  r.json = std::move(out);
  return r;
}

}  // namespace fracrelax
