#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

#include "fracrelax/mlf.hpp"

using namespace fracrelax;
using Big = boost::multiprecision::cpp_bin_float_100;

// Plain power series carried at 100 digits, enough to absorb the
// cancellation up to w = 60.
double series_oracle(double alpha, double beta, double x) {
  const Big bx(x), ba(alpha), bb(beta);
  Big sum = 0, xk = 1;
  for (int k = 0; k < 20000; ++k) {
    const Big term = xk / boost::multiprecision::tgamma(ba * k + bb);
    if (k % 2 == 0) sum += term; else sum -= term;
    if (k > 10 && abs(term) < abs(sum) * Big("1e-40")) break;
    xk *= bx;
  }
  return static_cast<double>(sum);
}

TEST(MittagLefflerCalibration, SweepAgainstHighPrecisionSeries) {
  double worst = 0.0;
  for (double a : {0.1, 0.3, 0.5, 0.75, 0.95}) {
    for (double b : {a, 1.0, 1.7}) {
      for (double w : {0.5, 1.9, 2.1, 8.0, 20.0, 35.0, 37.0, 60.0}) {
        const double x = std::pow(w, a);
        const double want = series_oracle(a, b, x);
        const double got = eval_ml(a, b, -x);
        const double err = std::fabs(got - want) / std::fabs(want);
        worst = std::max(worst, err);
        EXPECT_LE(err, 1e-10) << "alpha=" << a << " beta=" << b << " w=" << w;
      }
    }
  }
  RecordProperty("worst_relative_error", std::to_string(worst));
}

TEST(MittagLefflerCalibration, SmallBetaAbsoluteAccuracy) {
  for (double a : {0.6, 0.9}) {
    for (double w : {1.0, 5.0, 30.0, 40.0}) {
      const double x = std::pow(w, a);
      EXPECT_NEAR(eval_ml(a, 0.4, -x), series_oracle(a, 0.4, x), 1e-11) << a << " " << w;
    }
  }
}
