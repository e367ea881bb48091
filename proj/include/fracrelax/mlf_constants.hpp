#pragma once

// Regime boundaries for the Mittag-Leffler evaluator.
//
// All boundaries are expressed in w = |z|^(1/alpha). For 0 < alpha < 1 the
// alternating power series loses roughly log10(exp(w)) digits to
// cancellation, and the optimally truncated algebraic expansion has a
// remainder of order exp(-w), so w is the single variable that controls
// both hazards. The values below were fixed by sweeping
// alpha in [0.05, 1], beta in (0, 2] against a 100-digit series oracle
// (tests/mlf_calibration_test.cpp keeps that sweep as a regression test).

namespace fracrelax::mlf_constants {

/// Plain compensated series for w <= kSeriesMaxW.
inline constexpr double kSeriesMaxW = 2.0;

/// Optimally truncated asymptotic expansion for w >= kAsymptoticMinW.
inline constexpr double kAsymptoticMinW = 36.0;

/// Upper bound on the number of asymptotic terms. The smallest-term rule
/// needs about w / alpha terms, so small alpha needs far more than 20.
inline constexpr int kAsymptoticMaxTerms = 4000;

/// alpha == 1: series up to |z| <= kUnitSeriesMaxZ.
inline constexpr double kUnitSeriesMaxZ = 4.0;

/// alpha == 1: asymptotic expansion beyond this |z|; exp(-|z|) is then
/// below 1e-21 and the exponential contribution is dropped.
inline constexpr double kUnitAsymptoticMinZ = 50.0;

/// Relative tolerance handed to the double-exponential quadratures.
inline constexpr double kQuadratureTol = 1e-15;

}  // namespace fracrelax::mlf_constants
