#pragma once

// Riemann-Liouville integrals, nth level derivatives and Laplace transforms
// of functions sampled on graded grids x_i = x_max (i/m)^r, i = 1..m.

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fracrelax/errors.hpp"
#include "fracrelax/gamma.hpp"
#include "fracrelax/numeric.hpp"
#include "fracrelax/specparams.hpp"

namespace fracrelax {

class GradedGrid {
 public:
  GradedGrid() = default;
  GradedGrid(double x_max, int m, double grading = 1.0)
      : x_max_(x_max), grading_(grading) {
    if (!(x_max > 0.0) || !std::isfinite(x_max)) {
      throw ValidationError("GradedGrid: x_max must be > 0");
    }
    if (m < 2) throw ValidationError("GradedGrid: need at least 2 nodes");
    if (!(grading >= 1.0) || !std::isfinite(grading)) {
      throw ValidationError("GradedGrid: grading exponent must be >= 1");
    }
    nodes_.resize(m);
    for (int i = 1; i <= m; ++i) {
      nodes_[i - 1] = x_max * std::pow(static_cast<double>(i) / m, grading);
    }
    nodes_.back() = x_max;
  }

  /// Grading 2 / min_k(sigma_k + 1), clamped to [1, 6].
  static double default_grading(std::span<const double> sigmas) {
    double lo = 1.0;
    for (double s : sigmas) lo = std::min(lo, s + 1.0);
    if (!(lo > 0.0)) return 6.0;
    return std::clamp(2.0 / lo, 1.0, 6.0);
  }

  double x_max() const noexcept { return x_max_; }
  double grading() const noexcept { return grading_; }
  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  double operator[](std::size_t i) const noexcept { return nodes_[i]; }

  friend bool operator==(const GradedGrid& a, const GradedGrid& b) {
    return a.x_max_ == b.x_max_ && a.grading_ == b.grading_ &&
           a.nodes_.size() == b.nodes_.size();
  }

 private:
  double x_max_ = 1.0;
  double grading_ = 1.0;
  std::vector<double> nodes_;
};

/// Values at the grid nodes. `singular_exponent`, when set, is the known
/// leading power p of the function at 0 (f ~ c x^p); the first cell is then
/// integrated against c x^p exactly instead of by extrapolation.
struct SampledFunction {
  GradedGrid grid;
  std::vector<double> values;
  std::optional<double> singular_exponent;

  int size() const noexcept { return grid.size(); }
};

template <class Fn>
SampledFunction sample(const GradedGrid& grid, Fn&& fn,
                       std::optional<double> singular_exponent = std::nullopt) {
  SampledFunction out{grid, std::vector<double>(grid.size()), singular_exponent};
  for (int i = 0; i < grid.size(); ++i) out.values[i] = fn(grid[i]);
  return out;
}

namespace detail {

inline void check_sampled(const SampledFunction& f) {
  if (static_cast<int>(f.values.size()) != f.grid.size()) {
    throw ValidationError("SampledFunction: value count does not match grid");
  }
  for (double v : f.values) {
    if (!std::isfinite(v)) throw ValidationError("SampledFunction: non-finite value");
  }
  if (f.singular_exponent && !(*f.singular_exponent > -1.0)) {
    throw ValidationError("SampledFunction: singular exponent must be > -1");
  }
}

// Product-trapezoid weights for I^a on one output node.
class RLWeights {
 public:
  explicit RLWeights(double order) : a_(order), inv_gamma_(reciprocal_gamma(order)) {
    // (1 - r s)^{a-1} = sum_k c_k r^k s^k
    double c = 1.0;
    for (int k = 0; k < kTerms; ++k) {
      a_series_[k] = c / (k + 1);
      b_series_[k] = c / (k + 2);
      c *= -(a_ - 1.0 - k) / (k + 1);
    }
  }

  double order() const noexcept { return a_; }
  double inv_gamma() const noexcept { return inv_gamma_; }

  // For the cell [t0, t0 + h] and target x = t0 + u0 returns
  //   A  = int (x - t)^{a-1} dt,
  //   Bh = int (x - t)^{a-1} (t - t0) dt / h.
  void cell(double u0, double h, double& A, double& Bh) const {
    const double r = h / u0;
    if (r <= kSeriesCut) {
      double sa = a_series_[kTerms - 1];
      double sb = b_series_[kTerms - 1];
      for (int k = kTerms - 2; k >= 0; --k) {
        sa = sa * r + a_series_[k];
        sb = sb * r + b_series_[k];
      }
      const double scale = h * std::pow(u0, a_ - 1.0);
      A = scale * sa;
      Bh = scale * sb;
      return;
    }
    const double one_minus_r = std::max(0.0, 1.0 - r);
    const double v = std::pow(one_minus_r, a_);
    const double ua = std::pow(u0, a_);
    A = ua * (1.0 - v) / a_;
    const double j = ((1.0 - v) / a_ - (1.0 - v * one_minus_r) / (a_ + 1.0)) / (r * r);
    Bh = ua * r * j;
  }

 private:
  static constexpr int kTerms = 14;
  static constexpr double kSeriesCut = 0.05;
  double a_;
  double inv_gamma_;
  std::array<double, kTerms> a_series_{};
  std::array<double, kTerms> b_series_{};
};

// Row j (0-based) of the weight matrix: result_j = sum_i w[i] f_i.
// w must have size >= max(j + 1, 2); entries past the row are untouched.
inline void rl_row(const RLWeights& rw, const std::vector<double>& x, int j,
                   const std::optional<double>& first_exponent, double* w) {
  const double a = rw.order();
  const double xj = x[j];
  const int len = std::max(j + 1, 2);
  std::fill(w, w + len, 0.0);

  // First cell [0, x_0].
  const double x0 = x[0];
  if (first_exponent) {
    const double p = *first_exponent;
    double moment;  // int_0^{x0} (xj - t)^{a-1} (t/x0)^p dt
    if (j == 0) {
      moment = std::pow(x0, a) * boost::math::beta(p + 1.0, a);
    } else {
      moment = std::pow(xj, a + p) * std::pow(x0, -p) *
               boost::math::beta(p + 1.0, a, x0 / xj);
    }
    w[0] += moment;
  } else {
    // Linear extrapolation through the first two nodes.
    double A = 0.0, Bh = 0.0;
    rw.cell(xj, x0, A, Bh);
    const double B = Bh * x0;         // int (xj-t)^{a-1} t dt
    const double slope_part = B - x0 * A;  // int (xj-t)^{a-1} (t - x0) dt
    const double h2 = x[1] - x[0];
    w[0] += A - slope_part / h2;
    w[1] += slope_part / h2;
  }

  for (int i = 1; i <= j; ++i) {
    const double t0 = x[i - 1];
    const double h = x[i] - t0;
    double A = 0.0, Bh = 0.0;
    rw.cell(xj - t0, h, A, Bh);
    w[i - 1] += A - Bh;
    w[i] += Bh;
  }
  const double g = rw.inv_gamma();
  for (int i = 0; i < len; ++i) w[i] *= g;
}

inline std::optional<double> shifted_exponent(const std::optional<double>& p,
                                              double shift) {
  if (!p) return std::nullopt;
  const double q = *p + shift;
  if (!(q > -1.0)) return std::nullopt;
  return q;
}

}  // namespace detail

/// Product-trapezoidal Riemann-Liouville integral of order in (0, 2).
inline SampledFunction rl_integral_grid(double order, const SampledFunction& f) {
  if (!(order > 0.0) || !(order < 2.0)) {
    std::ostringstream os;
    os << "rl_integral_grid: order must lie in (0, 2), got " << order;
    throw ValidationError(os.str());
  }
  detail::check_sampled(f);
  const detail::RLWeights rw(order);
  const auto& x = f.grid.nodes();
  const int m = f.grid.size();
  std::vector<double> w(m + 1);
  SampledFunction out{f.grid, std::vector<double>(m),
                      detail::shifted_exponent(f.singular_exponent, order)};
  for (int j = 0; j < m; ++j) {
    detail::rl_row(rw, x, j, f.singular_exponent, w.data());
    CompensatedSum s;
    const int len = std::max(j + 1, 2);
    for (int i = 0; i < len; ++i) s.add(w[i] * f.values[i]);
    out.values[j] = s.value();
  }
  return out;
}

/// Fractional integral of any order >= 0, split into steps below 2.
inline SampledFunction rl_integral_grid_any(double order, SampledFunction f) {
  if (!(order >= 0.0)) throw ValidationError("rl_integral_grid_any: order < 0");
  while (order > kParamTol) {
    const double step = order >= 2.0 ? 1.0 : order;
    f = rl_integral_grid(step, f);
    order -= step;
  }
  return f;
}

/// Dense lower-triangular weight matrix of I^order for repeated use on
/// one grid (row j holds max(j + 1, 2) weights).
class RLIntegralMatrix {
 public:
  RLIntegralMatrix(const GradedGrid& grid, double order,
                   std::optional<double> first_exponent)
      : grid_(grid), order_(order), first_exponent_(first_exponent) {
    if (!(order > 0.0) || !(order < 2.0)) {
      throw ValidationError("RLIntegralMatrix: order must lie in (0, 2)");
    }
    const int m = grid.size();
    offsets_.resize(m + 1);
    std::size_t total = 0;
    for (int j = 0; j < m; ++j) {
      offsets_[j] = total;
      total += static_cast<std::size_t>(std::max(j + 1, 2));
    }
    offsets_[m] = total;
    weights_.resize(total);
    const detail::RLWeights rw(order);
    for (int j = 0; j < m; ++j) {
      detail::rl_row(rw, grid.nodes(), j, first_exponent, &weights_[offsets_[j]]);
    }
  }

  const GradedGrid& grid() const noexcept { return grid_; }
  double order() const noexcept { return order_; }

  std::vector<double> apply(std::span<const double> values) const {
    const int m = grid_.size();
    if (static_cast<int>(values.size()) != m) {
      throw ValidationError("RLIntegralMatrix: value count does not match grid");
    }
    std::vector<double> out(m);
    for (int j = 0; j < m; ++j) {
      const double* w = &weights_[offsets_[j]];
      const std::size_t len = offsets_[j + 1] - offsets_[j];
      double s = 0.0;
      for (std::size_t i = 0; i < len; ++i) s += w[i] * values[i];
      out[j] = s;
    }
    return out;
  }

 private:
  GradedGrid grid_;
  double order_;
  std::optional<double> first_exponent_;
  std::vector<std::size_t> offsets_;
  std::vector<double> weights_;
};

namespace detail {

// Fornberg weights for the first derivative at z on nodes x[0..n-1].
inline void fd_weights(double z, const double* x, int n, double* c1) {
  // c[j][k]: weight of node j for derivative k (k = 0, 1)
  std::array<std::array<double, 2>, 8> c{};
  double c1_prev = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1_prev * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1_prev * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1_prev = c2;
  }
  for (int j = 0; j < n; ++j) c1[j] = c[j][1];
}

// Power q of the first non-constant term of v ~ c0 + c1 x^q. Nodes 0, 1, 3
// of a graded grid are geometric (x1 / x0 = x3 / x1), so the difference
// ratio is exactly (x1 / x0)^q for such a v.
inline std::optional<double> nonconstant_exponent(const std::vector<double>& x,
                                                  const std::vector<double>& v) {
  const double d1 = v[1] - v[0];
  const double d2 = v[3] - v[1];
  if (!(d1 * d2 > 0.0)) return std::nullopt;
  const double q = std::log(d2 / d1) / std::log(x[1] / x[0]);
  if (!std::isfinite(q)) return std::nullopt;
  return q;
}

}  // namespace detail

/// Fourth-order finite-difference derivative (five-point stencils, one-sided
/// near the ends).
inline SampledFunction derivative_grid(const SampledFunction& f) {
  detail::check_sampled(f);
  const int m = f.grid.size();
  if (m < 5) throw ValidationError("derivative_grid: need at least 5 nodes");
  const auto& x = f.grid.nodes();
  SampledFunction out{f.grid, std::vector<double>(m), std::nullopt};
  double c[5];
  for (int j = 0; j < m; ++j) {
    const int start = std::clamp(j - 2, 0, m - 5);
    detail::fd_weights(x[j], &x[start], 5, c);
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += c[k] * f.values[start + k];
    out.values[j] = s;
  }
  if (f.singular_exponent && std::fabs(*f.singular_exponent) > kParamTol) {
    out.singular_exponent = detail::shifted_exponent(f.singular_exponent, -1.0);
  } else {
    // A constant leading term drops out; the next power sets the new one.
    const auto q = detail::nonconstant_exponent(x, f.values);
    if (q) out.singular_exponent = detail::shifted_exponent(*q, -1.0);
  }
  return out;
}

/// Grid version of D = (I^{g_1} d/dx) ... (I^{g_n} d/dx) I^{n-alpha-s_n}.
inline SampledFunction nth_level_derivative_grid(const DerivativeSpec& spec,
                                                 const SampledFunction& f) {
  require_valid(spec);
  detail::check_sampled(f);
  if (f.grid.size() < 16) {
    throw ValidationError("nth_level_derivative_grid: grid too coarse (m < 16)");
  }
  SampledFunction g = rl_integral_grid_any(spec.inner_order(), f);
  for (int k = spec.n(); k >= 1; --k) {
    g = derivative_grid(g);
    g = rl_integral_grid_any(spec.gamma()[k - 1], std::move(g));
  }
  return g;
}

struct AsymptoticTerm {
  double coeff = 0.0;
  double exponent = 0.0;
};

/// f(x) ~ sum_k d_k x^{e_k} as x -> infinity.
struct AsymptoticForm {
  std::vector<AsymptoticTerm> terms;

  double evaluate(double x) const {
    CompensatedSum s;
    for (const auto& t : terms) s.add(t.coeff * std::pow(x, t.exponent));
    return s.value();
  }
};

namespace detail {

// Upper incomplete gamma Gamma(a, x) for any real a and x > 0.
inline double upper_incomplete_gamma(double a, double x) {
  if (a > 0.0) return boost::math::tgamma(a, x);
  if (a == 0.0) return boost::math::expint(1, x);
  // Gamma(a, x) = (Gamma(a + 1, x) - x^a e^{-x}) / a
  return (upper_incomplete_gamma(a + 1.0, x) - std::pow(x, a) * std::exp(-x)) / a;
}

// 1 - e^{-q}(1 + q)
inline double one_minus_exp_poly(double q) {
  if (q < 0.05) {
    double term = q * q / 2.0;
    double s = 0.0;
    for (int k = 2; k < 20; ++k) {
      s += term * (k - 1);
      term *= -q / (k + 1);
    }
    return s;
  }
  return -std::expm1(-q) - q * std::exp(-q);
}

}  // namespace detail

/// int_0^inf f(t) e^{-s t} dt: exact integration of the piecewise-linear
/// interpolant against e^{-st} on [0, x_max], the singular moment on the
/// first cell, and the asymptotic tail beyond x_max.
inline double laplace_numeric(const SampledFunction& f, const AsymptoticForm& tail,
                              double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    std::ostringstream os;
    os << "laplace_numeric: s must be > 0, got " << s;
    throw ValidationError(os.str());
  }
  detail::check_sampled(f);
  const auto& x = f.grid.nodes();
  const auto& v = f.values;
  const int m = f.grid.size();
  CompensatedSum total;

  const double x0 = x[0];
  if (f.singular_exponent) {
    const double p = *f.singular_exponent;
    // f_0 (t/x0)^p on [0, x0]
    total.add(v[0] * std::pow(x0, -p) * boost::math::tgamma_lower(p + 1.0, s * x0) /
              std::pow(s, p + 1.0));
  } else {
    const double slope = (v[1] - v[0]) / (x[1] - x[0]);
    const double f_at_0 = v[0] - slope * x0;
    const double q = s * x0;
    total.add(f_at_0 * (-std::expm1(-q)) / s +
              slope * detail::one_minus_exp_poly(q) / (s * s));
  }
  for (int i = 1; i < m; ++i) {
    const double t0 = x[i - 1];
    const double h = x[i] - t0;
    const double q = s * h;
    const double e0 = std::exp(-s * t0);
    const double base = e0 * (-std::expm1(-q)) / s;            // int e^{-st}
    const double lin = e0 * detail::one_minus_exp_poly(q) / (s * s);  // int (t-t0) e^{-st}
    total.add(v[i - 1] * base + (v[i] - v[i - 1]) / h * lin);
  }
  const double X = f.grid.x_max();
  for (const auto& t : tail.terms) {
    if (t.coeff == 0.0) continue;
    const double a = t.exponent + 1.0;
    total.add(t.coeff * detail::upper_incomplete_gamma(a, s * X) / std::pow(s, a));
  }
  return total.value();
}

/// CSV with header `x,y`, optional `# sigma=<p>` comment, 17 significant
/// digits, LF line endings.
inline std::string to_csv(const SampledFunction& f) {
  std::ostringstream os;
  os.precision(17);
  if (f.singular_exponent) os << "# sigma=" << *f.singular_exponent << "\n";
  os << "x,y\n";
  for (int i = 0; i < f.grid.size(); ++i) {
    os << f.grid[i] << "," << f.values[i] << "\n";
  }
  return os.str();
}

/// Parses CSV written by to_csv; the nodes must form a graded grid.
inline SampledFunction sampled_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::optional<double> sigma;
  std::vector<double> xs, ys;
  bool header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("sigma=");
      if (pos != std::string::npos) sigma = std::stod(line.substr(pos + 6));
      continue;
    }
    if (!header) {
      if (line != "x,y") throw ValidationError("CSV: expected header 'x,y'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("CSV: malformed row: " + line);
    xs.push_back(std::stod(line.substr(0, comma)));
    ys.push_back(std::stod(line.substr(comma + 1)));
  }
  const int m = static_cast<int>(xs.size());
  if (m < 2) throw ValidationError("CSV: need at least two rows");
  const double r = std::log(xs.front() / xs.back()) / std::log(1.0 / m);
  const double grading = std::fabs(r - std::round(r)) < 1e-9 ? std::round(r) : r;
  GradedGrid grid(xs.back(), m, grading);
  for (int i = 0; i < m; ++i) {
    if (std::fabs(grid[i] - xs[i]) > 1e-9 * xs.back()) {
      throw ValidationError("CSV: x values do not form a graded grid");
    }
  }
  return SampledFunction{grid, ys, sigma};
}

}  // namespace fracrelax
