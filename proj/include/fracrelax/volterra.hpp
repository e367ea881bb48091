#pragma once

// Picard iteration for D y = F(x, y) in its Volterra form
//   y = I^alpha F(., y) + sum_k y_k x^{sigma_k} / Gamma(sigma_k + 1).
// The homogeneous part is kept as an exact power sum; only I^alpha F is
// discretized.

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracrelax/errors.hpp"
#include "fracrelax/gridops.hpp"
#include "fracrelax/power_sum.hpp"
#include "fracrelax/relax.hpp"
#include "fracrelax/specparams.hpp"

namespace fracrelax {

using RhsFunction = std::function<double(double x, double y)>;

struct VolterraProblem {
  DerivativeSpec spec;
  RhsFunction rhs;
  std::vector<double> y;  // initial values, as in RelaxationProblem
  GradedGrid grid;
  double tol = 1e-12;
  int max_iter = 500;
};

struct PicardResult {
  SampledFunction solution;
  int iterations = 0;
  /// Mixed absolute/relative change of the last iteration.
  double last_change = 0.0;
  /// Sup-norm residual of the returned iterate.
  double residual = 0.0;
  bool converged = false;
  /// Mixed change per iteration.
  std::vector<double> history;
};

/// Thrown when max_iter is exhausted; carries the last iterate.
class PicardNonConvergence : public NonConvergence {
 public:
  PicardNonConvergence(const std::string& what, PicardResult last)
      : NonConvergence(what), last_(std::move(last)) {}
  const PicardResult& last() const noexcept { return last_; }

 private:
  PicardResult last_;
};

namespace detail {

inline void check_volterra(const VolterraProblem& p) {
  require_valid(p.spec);
  if (!p.rhs) throw ValidationError("picard: right-hand side is empty");
  if (!(p.tol > 0.0)) throw ValidationError("picard: tol must be > 0");
  if (p.max_iter < 1) throw ValidationError("picard: max_iter must be >= 1");
  if (p.grid.size() < 2) throw ValidationError("picard: grid has no nodes");
}

// Leading exponent of the homogeneous part, used for the first cell.
inline std::optional<double> leading_exponent(const PowerSum& h) {
  return h.min_exponent();
}

inline std::vector<double> rhs_values(const VolterraProblem& p,
                                      const std::vector<double>& y) {
  std::vector<double> g(y.size());
  const auto& x = p.grid.nodes();
  for (std::size_t i = 0; i < y.size(); ++i) {
    g[i] = p.rhs(x[i], y[i]);
    if (!std::isfinite(g[i])) {
      std::ostringstream os;
      os << "picard: right-hand side is not finite at x = " << x[i]
         << " (y = " << y[i] << ")";
      throw NumericError(os.str());
    }
  }
  return g;
}

// max_i |a_i - b_i| / max(1, |a_i|): absolute where the iterate is O(1),
// relative at nodes where a singular solution is large.
inline double mixed_change(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::fabs(a[i] - b[i]) / std::max(1.0, std::fabs(a[i])));
  }
  return m;
}

}  // namespace detail

/// Sup-norm of candidate - (I^alpha F(., candidate) + homogeneous part).
inline double residual(const VolterraProblem& p, const SampledFunction& candidate) {
  detail::check_volterra(p);
  if (!(candidate.grid == p.grid)) {
    throw ValidationError("residual: candidate is not sampled on the problem grid");
  }
  const PowerSum h = solve_homogeneous(p.spec, p.y);
  const auto g = detail::rhs_values(p, candidate.values);
  SampledFunction gs{p.grid, g, detail::leading_exponent(h)};
  const SampledFunction ig = rl_integral_grid(p.spec.alpha(), gs);
  double m = 0.0;
  for (int i = 0; i < p.grid.size(); ++i) {
    const double target = ig.values[i] + evaluate(h, p.grid[i]);
    m = std::max(m, std::fabs(candidate.values[i] - target));
  }
  return m;
}

/// Fixed-point iteration from the homogeneous part; stops when
/// max_i |y_new - y_old| / max(1, |y_new|) drops to tol.
inline PicardResult picard_solve(const VolterraProblem& p) {
  detail::check_volterra(p);
  const double alpha = p.spec.alpha();
  if (!(alpha < 2.0)) throw ValidationError("picard: alpha out of range");
  const PowerSum h = solve_homogeneous(p.spec, p.y);
  const int m = p.grid.size();
  std::vector<double> hv(m);
  for (int i = 0; i < m; ++i) hv[i] = evaluate(h, p.grid[i]);

  const RLIntegralMatrix op(p.grid, alpha, detail::leading_exponent(h));
  PicardResult r;
  std::vector<double> y = hv;
  for (int it = 1; it <= p.max_iter; ++it) {
    const auto g = detail::rhs_values(p, y);
    std::vector<double> next = op.apply(g);
    for (int i = 0; i < m; ++i) {
      next[i] += hv[i];
      if (!std::isfinite(next[i])) {
        std::ostringstream os;
        os << "picard: iterate " << it << " is not finite at x = " << p.grid[i];
        throw NumericError(os.str());
      }
    }
    const double change = detail::mixed_change(next, y);
    y = std::move(next);
    r.history.push_back(change);
    r.iterations = it;
    r.last_change = change;
    if (change <= p.tol) {
      r.converged = true;
      break;
    }
  }
  const auto g = detail::rhs_values(p, y);
  const auto ig = op.apply(g);
  double res = 0.0;
  for (int i = 0; i < m; ++i) res = std::max(res, std::fabs(y[i] - ig[i] - hv[i]));
  r.residual = res;
  r.solution = SampledFunction{p.grid, std::move(y), detail::leading_exponent(h)};
  if (!r.converged) {
    std::ostringstream os;
    os << "picard: no convergence after " << p.max_iter
       << " iterations (last change " << r.last_change << ", residual " << res << ")";
    throw PicardNonConvergence(os.str(), std::move(r));
  }
  return r;
}

/// Right-hand sides by name: "linear:c" gives F = c y and
/// "logistic:a,b" gives F = a y (1 - y / b).
inline RhsFunction make_rhs(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ValidationError("rhs: expected 'name:params', got '" + text + "'");
  }
  const std::string name = text.substr(0, colon);
  std::vector<double> args;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      args.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("rhs: bad number '" + item + "' in '" + text + "'");
    }
  }
  if (name == "linear") {
    if (args.size() != 1) throw ValidationError("rhs: linear takes one parameter");
    const double c = args[0];
    return [c](double, double y) { return c * y; };
  }
  if (name == "logistic") {
    if (args.size() != 2) throw ValidationError("rhs: logistic takes two parameters");
    const double a = args[0], b = args[1];
    if (b == 0.0) throw ValidationError("rhs: logistic capacity must be nonzero");
    return [a, b](double, double y) { return a * y * (1.0 - y / b); };
  }
  throw ValidationError("rhs: unknown right-hand side '" + name + "'");
}

}  // namespace fracrelax
