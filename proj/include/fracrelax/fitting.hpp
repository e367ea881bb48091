#pragma once

// Least-squares fit of relaxation data to the closed-form solution with a
// bounded Nelder-Mead simplex search.
//
// Parameter vector (length 2n + 2):
//   [alpha, gamma_1..gamma_n, lambda, y_1..y_n]
// For a reduced trial type only the y entries of surviving kernel
// exponents are used.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracrelax/errors.hpp"
#include "fracrelax/relax.hpp"
#include "fracrelax/rng.hpp"
#include "fracrelax/specparams.hpp"

namespace fracrelax {

struct FitBounds {
  std::vector<double> lo;
  std::vector<double> hi;
};

struct FitProblem {
  std::vector<double> x;
  std::vector<double> y;
  int n = 1;
  std::vector<bool> free_mask;
  FitBounds bounds;
  std::vector<double> initial_guess;
  unsigned long long seed = 42;
  int max_evals = 4000;
  /// Multiplies residual i by x_i / (1 + x_i), de-emphasising the
  /// neighbourhood of 0 where terms with sigma_k < 0 blow up.
  bool downweight_origin = false;
};

struct FitResult {
  std::vector<double> parameters;
  double rss = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string spec_label;
  CMReport cm;
};

/// Names of the parameter slots: alpha, gamma1.., lambda, y1...
inline std::vector<std::string> fit_parameter_names(int n) {
  std::vector<std::string> names{"alpha"};
  for (int k = 1; k <= n; ++k) names.push_back("gamma" + std::to_string(k));
  names.push_back("lambda");
  for (int k = 1; k <= n; ++k) names.push_back("y" + std::to_string(k));
  return names;
}

/// Default box: alpha in [0.05, 1], gamma_k in [0, k], lambda in [1e-6, 1e3],
/// y_k in [-1e3, 1e3].
inline FitBounds default_fit_bounds(int n) {
  FitBounds b;
  b.lo.push_back(0.05);
  b.hi.push_back(1.0);
  for (int k = 1; k <= n; ++k) {
    b.lo.push_back(0.0);
    b.hi.push_back(static_cast<double>(k));
  }
  b.lo.push_back(1e-6);
  b.hi.push_back(1e3);
  for (int k = 1; k <= n; ++k) {
    b.lo.push_back(-1e3);
    b.hi.push_back(1e3);
  }
  return b;
}

/// Builds the relaxation problem for a full parameter vector; nullopt when
/// the type is not admissible.
inline std::optional<RelaxationProblem> fit_model(int n, const std::vector<double>& p) {
  const double alpha = p[0];
  std::vector<double> gamma(p.begin() + 1, p.begin() + 1 + n);
  const double lambda = p[n + 1];
  if (!(alpha > 0.0) || alpha > 1.0 || !(lambda > 0.0)) return std::nullopt;
  for (double v : p) {
    if (!std::isfinite(v)) return std::nullopt;
  }
  const DerivativeSpec spec(alpha, gamma);
  if (!validate(spec).valid) return std::nullopt;
  const SpecClass c = classify(spec);
  std::vector<double> y;
  for (int i : c.surviving) y.push_back(p[n + 2 + i]);
  return RelaxationProblem{spec, lambda, y};
}

namespace detail {

inline void check_fit_problem(const FitProblem& p) {
  const std::size_t dim = 2 * static_cast<std::size_t>(p.n) + 2;
  if (p.n < 1) throw ValidationError("fit: n must be >= 1");
  if (p.x.size() != p.y.size() || p.x.empty()) {
    throw ValidationError("fit: data must hold matching, non-empty x and y columns");
  }
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    if (!(p.x[i] > 0.0) || !std::isfinite(p.y[i])) {
      throw ValidationError("fit: data must have x > 0 and finite y");
    }
    if (i > 0 && !(p.x[i] > p.x[i - 1])) {
      throw ValidationError("fit: data x must be strictly increasing");
    }
  }
  if (p.free_mask.size() != dim || p.initial_guess.size() != dim ||
      p.bounds.lo.size() != dim || p.bounds.hi.size() != dim) {
    std::ostringstream os;
    os << "fit: mask, bounds and initial guess need " << dim << " entries";
    throw ValidationError(os.str());
  }
  if (std::none_of(p.free_mask.begin(), p.free_mask.end(), [](bool b) { return b; })) {
    throw ValidationError("fit: at least one parameter must be free");
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(p.bounds.lo[i] <= p.bounds.hi[i])) {
      throw ValidationError("fit: bound " + fit_parameter_names(p.n)[i] +
                            " has lo > hi");
    }
  }
}

}  // namespace detail

/// Sum of squared residuals; +infinity for inadmissible parameters.
inline double fit_objective(const FitProblem& p, const std::vector<double>& params) {
  const auto model = fit_model(p.n, params);
  if (!model) return std::numeric_limits<double>::infinity();
  const RelaxationSolution sol = solve_relaxation(*model);
  CompensatedSum rss;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    double r = p.y[i] - evaluate_solution(sol, p.x[i]);
    if (p.downweight_origin) r *= p.x[i] / (1.0 + p.x[i]);
    rss.add(r * r);
  }
  const double v = rss.value();
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

/// Bounded Nelder-Mead over the free parameters. Trial points are clamped
/// to the box; inadmissible types score +infinity. The initial simplex
/// steps are jittered by the seeded generator, so runs are reproducible.
inline FitResult fit(const FitProblem& p) {
  detail::check_fit_problem(p);
  std::vector<int> idx;
  for (std::size_t i = 0; i < p.free_mask.size(); ++i) {
    if (p.free_mask[i]) idx.push_back(static_cast<int>(i));
  }
  const int d = static_cast<int>(idx.size());

  std::vector<double> base = p.initial_guess;
  for (std::size_t i = 0; i < base.size(); ++i) {
    base[i] = std::clamp(base[i], p.bounds.lo[i], p.bounds.hi[i]);
  }
  int evals = 0;
  auto full = [&](const std::vector<double>& z) {
    std::vector<double> q = base;
    for (int j = 0; j < d; ++j) {
      q[idx[j]] = std::clamp(z[j], p.bounds.lo[idx[j]], p.bounds.hi[idx[j]]);
    }
    return q;
  };
  auto f = [&](const std::vector<double>& z) {
    ++evals;
    return fit_objective(p, full(z));
  };

  double data_scale = 0.0;
  for (double v : p.y) data_scale += v * v;
  const double rss_floor = 1e-28 * std::max(data_scale, 1e-300);

  std::vector<double> z0(d);
  for (int j = 0; j < d; ++j) z0[j] = base[idx[j]];

  FitResult out;
  double f0 = f(z0);
  if (!std::isfinite(f0)) {
    // Look for any admissible point in the box before giving up.
    Rng probe(p.seed);
    bool found = false;
    for (int t = 0; t < 2000 && !found; ++t) {
      std::vector<double> z(d);
      for (int j = 0; j < d; ++j) {
        const double lo = p.bounds.lo[idx[j]], hi = p.bounds.hi[idx[j]];
        z[j] = probe.uniform(lo, hi);
      }
      const double fz = f(z);
      if (std::isfinite(fz)) {
        z0 = z;
        f0 = fz;
        found = true;
      }
    }
    if (!found) {
      throw ValidationError(
          "fit: no admissible parameter vector found inside the bounds "
          "(check 0 <= gamma_k and alpha + s_k <= k)");
    }
  }

  Rng rng(p.seed);

  std::vector<double> best = z0;
  double fbest = f0;
  int iterations = 0;
  bool converged = fbest <= rss_floor;

  for (int restart = 0; restart < 3 && fbest > rss_floor && evals < p.max_evals; ++restart) {
    std::vector<std::vector<double>> s(d + 1, best);
    std::vector<double> fs(d + 1, fbest);
    for (int j = 0; j < d; ++j) {
      const double lo = p.bounds.lo[idx[j]], hi = p.bounds.hi[idx[j]];
      double step = 0.1 * std::max(std::fabs(best[j]), 1e-3) * rng.uniform(0.8, 1.2);
      if (best[j] + step > hi) step = -step;
      if (best[j] + step < lo) step = 0.5 * (hi - lo);
      s[j + 1][j] += step;
      fs[j + 1] = f(s[j + 1]);
    }
    std::vector<int> order(d + 1);
    bool tol_hit = false;
    for (;;) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
      const int lo_i = order.front(), hi_i = order.back(), nh_i = order[d - 1];
      ++iterations;
      const double fl = fs[lo_i], fh = fs[hi_i];
      double size = 0.0;
      for (int v = 0; v <= d; ++v) {
        for (int j = 0; j < d; ++j) {
          size = std::max(size, std::fabs(s[v][j] - s[lo_i][j]) /
                                    std::max(1.0, std::fabs(s[lo_i][j])));
        }
      }
      if (fl <= rss_floor ||
          (std::fabs(fh - fl) <= 1e-15 * std::fabs(fl) + rss_floor && size <= 1e-9) ||
          size <= 1e-13) {
        tol_hit = true;
        break;
      }
      if (evals >= p.max_evals) break;

      std::vector<double> c(d, 0.0);
      for (int v = 0; v <= d; ++v) {
        if (v == hi_i) continue;
        for (int j = 0; j < d; ++j) c[j] += s[v][j] / d;
      }
      auto along = [&](double t) {
        std::vector<double> z(d);
        for (int j = 0; j < d; ++j) z[j] = c[j] + t * (s[hi_i][j] - c[j]);
        for (int j = 0; j < d; ++j) {
          z[j] = std::clamp(z[j], p.bounds.lo[idx[j]], p.bounds.hi[idx[j]]);
        }
        return z;
      };
      const auto zr = along(-1.0);
      const double fr = f(zr);
      if (fr < fl) {
        const auto ze = along(-2.0);
        const double fe = f(ze);
        if (fe < fr) {
          s[hi_i] = ze;
          fs[hi_i] = fe;
        } else {
          s[hi_i] = zr;
          fs[hi_i] = fr;
        }
      } else if (fr < fs[nh_i]) {
        s[hi_i] = zr;
        fs[hi_i] = fr;
      } else {
        const bool outside = fr < fh;
        const auto zc = along(outside ? -0.5 : 0.5);
        const double fc = f(zc);
        if (fc < (outside ? fr : fh)) {
          s[hi_i] = zc;
          fs[hi_i] = fc;
        } else {
          for (int v = 0; v <= d; ++v) {
            if (v == lo_i) continue;
            for (int j = 0; j < d; ++j) s[v][j] = s[lo_i][j] + 0.5 * (s[v][j] - s[lo_i][j]);
            fs[v] = f(s[v]);
          }
        }
      }
    }
    const int lo_i = static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());
    const bool improved = fs[lo_i] < fbest * (1.0 - 1e-12);
    if (fs[lo_i] <= fbest) {
      fbest = fs[lo_i];
      best = s[lo_i];
    }
    if (fbest <= rss_floor) {
      converged = true;
      break;
    }
    converged = tol_hit;
    // A restart that brings no improvement confirms the optimum.
    if (!tol_hit || (restart > 0 && !improved)) break;
  }

  out.parameters = full(best);
  out.rss = fbest;
  out.iterations = std::max(iterations, 1);
  out.evaluations = evals;
  out.converged = converged;
  const auto model = fit_model(p.n, out.parameters);
  const SpecClass c = classify(model->spec);
  out.spec_label = label(c);
  out.cm = cm_verdict(*model);
  return out;
}

/// Power-law tail of the fitted model, terms sorted by exponent, largest
/// first.
inline AsymptoticForm fit_report_tail(const FitProblem& p, const FitResult& r) {
  const auto model = fit_model(p.n, r.parameters);
  if (!model) throw ValidationError("fit_report_tail: fitted parameters are not admissible");
  AsymptoticForm a = asymptotic_form(*model);
  std::stable_sort(a.terms.begin(), a.terms.end(),
                   [](const AsymptoticTerm& x, const AsymptoticTerm& y) {
                     return x.exponent > y.exponent;
                   });
  return a;
}

}  // namespace fracrelax
