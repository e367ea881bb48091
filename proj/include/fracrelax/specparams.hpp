#pragma once

// Order/type specification of the nth level fractional derivative
//
//   D = (I^{g_1} d/dx)(I^{g_2} d/dx) ... (I^{g_n} d/dx) I^{n - alpha - s_n},
//   s_k = g_1 + ... + g_k,
//
// together with its admissibility checks, classification (including
// reduction of degenerate types to a lower level) and the coefficient
// formulas shared by the projector, Laplace and relaxation modules.

#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fracrelax/errors.hpp"
#include "fracrelax/numeric.hpp"
#include "fracrelax/power_sum.hpp"

namespace fracrelax {

class DerivativeSpec {
 public:
  DerivativeSpec() = default;
  DerivativeSpec(double alpha, std::vector<double> gamma)
      : alpha_(alpha), gamma_(std::move(gamma)) {}

  static DerivativeSpec riemann_liouville(double alpha) { return {alpha, {0.0}}; }
  static DerivativeSpec caputo(double alpha) { return {alpha, {1.0 - alpha}}; }
  static DerivativeSpec hilfer(double alpha, double type) { return {alpha, {type}}; }

  double alpha() const noexcept { return alpha_; }
  const std::vector<double>& gamma() const noexcept { return gamma_; }
  int n() const noexcept { return static_cast<int>(gamma_.size()); }

  /// s_k for k = 1..n (0-based storage).
  std::vector<double> partial_sums() const {
    std::vector<double> s(gamma_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < gamma_.size(); ++i) {
      acc += gamma_[i];
      s[i] = acc;
    }
    return s;
  }
  double s_n() const {
    double acc = 0.0;
    for (double g : gamma_) acc += g;
    return acc;
  }

  /// Kernel exponents sigma_k = alpha + s_k - k; values within the
  /// parameter tolerance of 0 are returned as exactly 0.
  std::vector<double> sigma() const {
    auto s = partial_sums();
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double v = alpha_ + s[i] - static_cast<double>(i + 1);
      out[i] = std::fabs(v) <= kParamTol ? 0.0 : v;
    }
    return out;
  }

  /// Order of the innermost integral, n - alpha - s_n (never negative).
  double inner_order() const {
    const double v = n() - alpha_ - s_n();
    return std::fabs(v) <= kParamTol ? 0.0 : std::max(v, 0.0);
  }

  friend bool operator==(const DerivativeSpec&, const DerivativeSpec&) = default;

 private:
  double alpha_ = 1.0;
  std::vector<double> gamma_;
};

inline std::string describe(const DerivativeSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "alpha=" << spec.alpha() << " gamma=(";
  for (int i = 0; i < spec.n(); ++i) os << (i ? "," : "") << spec.gamma()[i];
  os << ")";
  return os.str();
}

struct ValidationReport {
  bool valid = false;            // type constraints 0 <= g_k, alpha + s_k <= k
  bool truly_nth_level = false;  // n-1 < alpha + s_n and g_k < 1 (k >= 2)
  bool cm_admissible = false;    // k - 1 <= s_k for all k
  std::vector<double> s;
  std::vector<double> sigma;
  std::vector<std::string> messages;
};

namespace detail {

inline void check_structure(const DerivativeSpec& spec) {
  if (spec.n() == 0) throw ValidationError("derivative spec: level n must be >= 1");
  if (!std::isfinite(spec.alpha()) || !(spec.alpha() > 0.0) ||
      spec.alpha() > 1.0) {
    std::ostringstream os;
    os << "derivative spec: alpha must lie in (0, 1], got " << spec.alpha();
    throw ValidationError(os.str());
  }
  for (double g : spec.gamma()) {
    if (!std::isfinite(g)) {
      throw ValidationError("derivative spec: non-finite gamma entry");
    }
  }
}

}  // namespace detail

/// Checks the type constraints, the truly-nth-level conditions and the
/// complete-monotonicity admissibility condition. Throws ValidationError
/// only for structurally invalid input (n = 0, alpha outside (0,1], NaN).
inline ValidationReport validate(const DerivativeSpec& spec) {
  detail::check_structure(spec);
  ValidationReport r;
  r.s = spec.partial_sums();
  r.sigma = spec.sigma();
  const int n = spec.n();
  const double a = spec.alpha();

  r.valid = true;
  for (int k = 1; k <= n; ++k) {
    const double g = spec.gamma()[k - 1];
    if (g < -kParamTol) {
      r.valid = false;
      std::ostringstream os;
      os << "gamma_" << k << " = " << g << " is negative";
      r.messages.push_back(os.str());
    }
    if (a + r.s[k - 1] > k + kParamTol) {
      r.valid = false;
      std::ostringstream os;
      os << "alpha + s_" << k << " = " << a + r.s[k - 1] << " exceeds " << k;
      r.messages.push_back(os.str());
    }
  }

  r.truly_nth_level = r.valid && (a + r.s[n - 1] > (n - 1) + kParamTol);
  if (r.valid && !(a + r.s[n - 1] > (n - 1) + kParamTol)) {
    std::ostringstream os;
    os << "alpha + s_n = " << a + r.s[n - 1] << " <= n - 1: level reduces";
    r.messages.push_back(os.str());
  }
  for (int k = 2; k <= n && r.valid; ++k) {
    if (spec.gamma()[k - 1] >= 1.0 - kParamTol) {
      r.truly_nth_level = false;
      std::ostringstream os;
      os << "gamma_" << k << " >= 1: level reduces";
      r.messages.push_back(os.str());
    }
  }

  r.cm_admissible = r.valid;
  for (int k = 1; k <= n && r.valid; ++k) {
    if (r.s[k - 1] < (k - 1) - kParamTol) {
      r.cm_admissible = false;
      std::ostringstream os;
      os << "s_" << k << " = " << r.s[k - 1] << " < " << k - 1
         << ": complete monotonicity condition fails";
      r.messages.push_back(os.str());
    }
  }
  return r;
}

/// Throws ValidationError unless the type constraints hold.
inline ValidationReport require_valid(const DerivativeSpec& spec) {
  auto r = validate(spec);
  if (!r.valid) {
    std::string msg = "invalid derivative spec " + describe(spec);
    for (const auto& m : r.messages) msg += "; " + m;
    throw ValidationError(msg);
  }
  return r;
}

enum class SpecKind { RiemannLiouville, Caputo, Hilfer, TrulyNthLevel, Reduced };

inline std::string_view to_string(SpecKind k) noexcept {
  switch (k) {
    case SpecKind::RiemannLiouville: return "RiemannLiouville";
    case SpecKind::Caputo: return "Caputo";
    case SpecKind::Hilfer: return "Hilfer";
    case SpecKind::TrulyNthLevel: return "TrulyNthLevel";
    case SpecKind::Reduced: return "Reduced";
  }
  return "unknown";
}

struct SpecClass {
  /// Label of the effective operator. Reduced is used only when the
  /// effective level is still >= 2; a reduction down to level 1 reports the
  /// first-level label (RiemannLiouville, Caputo or Hilfer) with
  /// `reduced = true`.
  SpecKind kind = SpecKind::TrulyNthLevel;
  bool reduced = false;
  /// Equivalent spec of the lowest level (the input itself when no
  /// reduction applies).
  DerivativeSpec effective;
  /// For every effective index, the 0-based index of the original kernel
  /// exponent sigma_k it carries. Original indices not listed here have
  /// vanishing projector and Laplace coefficients.
  std::vector<int> surviving;
  std::string notes;

  /// Type of the effective first-level operator (meaningful when the
  /// effective level is 1).
  double hilfer_type() const { return effective.gamma().front(); }
};

namespace detail {

inline SpecKind first_level_kind(const DerivativeSpec& s) {
  const double g = s.gamma().front();
  if (std::fabs(g) <= kParamTol) return SpecKind::RiemannLiouville;
  if (std::fabs(g - (1.0 - s.alpha())) <= kParamTol) return SpecKind::Caputo;
  return SpecKind::Hilfer;
}

inline std::string gamma_text(const std::vector<double>& g) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < g.size(); ++i) os << (i ? ", " : "") << g[i];
  os << ")";
  return os.str();
}

}  // namespace detail

/// Reduces degenerate types to the equivalent lower-level operator.
///
/// Two rewrite rules, both consequences of d/dx I^1 = Id and the index law:
///  * alpha + s_n <= n - 1: the trailing factor I^{g_n} d/dx is absorbed by
///    the innermost integral, dropping g_n (and sigma_n).
///  * g_k >= 1 (k >= 2): factors k-1 and k merge into one factor of type
///    g_{k-1} + g_k - 1, dropping sigma_{k-1}.
/// Rules are applied innermost first, repeatedly, until neither applies.
inline SpecClass classify(const DerivativeSpec& spec) {
  require_valid(spec);
  SpecClass out;
  std::vector<double> g = spec.gamma();
  std::vector<int> keep(g.size());
  for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = static_cast<int>(i);
  const double a = spec.alpha();
  std::ostringstream notes;
  notes << "type " << detail::gamma_text(g);

  for (;;) {
    const int n = static_cast<int>(g.size());
    if (n == 1) break;
    double s_n = 0.0;
    for (double v : g) s_n += v;
    if (a + s_n <= (n - 1) + kParamTol) {
      g.pop_back();
      keep.pop_back();
      notes << " -> alpha+s_" << n << " <= " << n - 1 << ": "
            << detail::gamma_text(g);
      out.reduced = true;
      continue;
    }
    bool merged = false;
    for (int k = n; k >= 2; --k) {
      if (g[k - 1] >= 1.0 - kParamTol) {
        const double m = std::max(0.0, g[k - 2] + g[k - 1] - 1.0);
        g[k - 2] = std::fabs(m) <= kParamTol ? 0.0 : m;
        g.erase(g.begin() + (k - 1));
        keep.erase(keep.begin() + (k - 2));
        notes << " -> gamma_" << k << " >= 1: " << detail::gamma_text(g);
        out.reduced = true;
        merged = true;
        break;
      }
    }
    if (!merged) break;
  }

  out.effective = DerivativeSpec(a, g);
  out.surviving = keep;
  if (g.size() == 1) {
    out.kind = detail::first_level_kind(out.effective);
    notes << " => " << to_string(out.kind);
    if (out.kind == SpecKind::Hilfer) notes << "(" << g.front() << ")";
  } else {
    out.kind = out.reduced ? SpecKind::Reduced : SpecKind::TrulyNthLevel;
    notes << " => " << (out.reduced ? "Reduced to level " : "truly level ")
          << g.size();
  }
  out.notes = notes.str();
  return out;
}

/// Short label: "Caputo", "RiemannLiouville", "Hilfer(0.1)",
/// "TrulyNthLevel" or "Reduced(n=2)".
inline std::string label(const SpecClass& c) {
  std::ostringstream os;
  switch (c.kind) {
    case SpecKind::Hilfer: os << "Hilfer(" << c.hilfer_type() << ")"; break;
    case SpecKind::Reduced: os << "Reduced(n=" << c.effective.n() << ")"; break;
    default: os << to_string(c.kind);
  }
  return os.str();
}

enum class RegionLabel {
  RLVertex,
  CaputoVertex,
  Truly2LVertex,
  HilferEdge,
  Truly2LEdgeGamma1,  // gamma_1 = 1 - alpha
  Truly2LEdgeGamma2,  // gamma_2 = 1 - gamma_1
  Interior,
  OutsideTriangle,
};

inline std::string_view to_string(RegionLabel r) noexcept {
  switch (r) {
    case RegionLabel::RLVertex: return "RL-vertex";
    case RegionLabel::CaputoVertex: return "Caputo-vertex";
    case RegionLabel::Truly2LVertex: return "Truly2L-vertex";
    case RegionLabel::HilferEdge: return "Hilfer-edge";
    case RegionLabel::Truly2LEdgeGamma1: return "Truly2L-edge-gamma1=1-alpha";
    case RegionLabel::Truly2LEdgeGamma2: return "Truly2L-edge-gamma2=1-gamma1";
    case RegionLabel::Interior: return "Interior";
    case RegionLabel::OutsideTriangle: return "OutsideTriangle";
  }
  return "unknown";
}

/// Position of a second-level type in the complete-monotonicity triangle
/// with vertices (0, 1), (1 - alpha, 1), (1 - alpha, alpha). The upper edge
/// gamma_2 = 1 (first-level operators) is included.
inline RegionLabel triangle_region(const DerivativeSpec& spec) {
  detail::check_structure(spec);
  if (spec.n() != 2) {
    throw ValidationError("triangle_region: requires a second-level spec (n = 2)");
  }
  const double a = spec.alpha();
  const double g1 = spec.gamma()[0];
  const double g2 = spec.gamma()[1];
  const double tol = kParamTol;

  const bool inside = g1 >= -tol && g1 <= 1.0 - a + tol && g2 >= -tol &&
                      g2 <= 1.0 + tol && g1 + g2 >= 1.0 - tol &&
                      g1 + g2 <= 2.0 - a + tol;
  if (!inside) return RegionLabel::OutsideTriangle;

  const bool left = near(g1, 0.0);         // only reachable at the RL vertex
  const bool right = near(g1, 1.0 - a);
  const bool top = near(g2, 1.0);
  const bool hyp = near(g1 + g2, 1.0);
  if (top && (left || hyp)) return RegionLabel::RLVertex;
  if (top && right) return RegionLabel::CaputoVertex;
  if (right && hyp) return RegionLabel::Truly2LVertex;
  if (top) return RegionLabel::HilferEdge;
  if (right) return RegionLabel::Truly2LEdgeGamma1;
  if (hyp) return RegionLabel::Truly2LEdgeGamma2;
  return RegionLabel::Interior;
}

/// Basis x^{sigma_k} of the kernel; for degenerate types the (smaller)
/// basis of the reduced operator.
inline std::vector<PowerSum> kernel_basis(const DerivativeSpec& spec) {
  const SpecClass c = classify(spec);
  std::vector<PowerSum> basis;
  for (double s : c.effective.sigma()) basis.push_back(PowerSum::monomial(1.0, s));
  return basis;
}

/// Projector coefficients p_k and exponents sigma_k (0-based, length n).
struct ProjectorCoeffs {
  std::vector<double> p;
  std::vector<double> sigma;
};

struct LaplaceTerm {
  double coeff = 0.0;
  double exponent = 0.0;  // k - s_k - 1
};

/// L[D f](s) = s^alpha F(s) - sum_k a_k s^{k - s_k - 1}.
struct LaplaceForm {
  double alpha = 1.0;
  std::vector<LaplaceTerm> terms;

  /// The subtracted initial-data polynomial  sum_k a_k s^{k - s_k - 1}.
  double initial_part(double s) const {
    CompensatedSum acc;
    for (const auto& t : terms) acc.add(t.coeff * std::pow(s, t.exponent));
    return acc.value();
  }
  /// s^alpha F(s) - initial_part(s) given F(s) = L[f](s).
  double apply(double s, double transform_of_f) const {
    return std::pow(s, alpha) * transform_of_f - initial_part(s);
  }
};

/// Laplace-domain form of the derivative with initial data a_1..a_n.
/// Entries belonging to kernel exponents dropped by the reduction are set
/// to zero, since those initial values vanish identically.
inline LaplaceForm laplace_form(const DerivativeSpec& spec,
                                const std::vector<double>& a) {
  if (static_cast<int>(a.size()) != spec.n()) {
    std::ostringstream os;
    os << "laplace_form: expected " << spec.n() << " initial values, got "
       << a.size();
    throw ValidationError(os.str());
  }
  const SpecClass c = classify(spec);
  std::vector<bool> alive(a.size(), false);
  for (int i : c.surviving) alive[i] = true;
  const auto s = spec.partial_sums();
  LaplaceForm out;
  out.alpha = spec.alpha();
  for (int k = 1; k <= spec.n(); ++k) {
    double e = k - s[k - 1] - 1.0;
    if (std::fabs(e) <= kParamTol) e = 0.0;
    out.terms.push_back({alive[k - 1] ? a[k - 1] : 0.0, e});
  }
  return out;
}

}  // namespace fracrelax
