#include <gtest/gtest.h>

#include <cmath>

#include "fracrelax/mlf.hpp"

using namespace fracrelax;

TEST(MittagLeffler, HalfOrderAgainstErfc) {
  // E_{1/2,1}(-x) = exp(x^2) erfc(x), evaluated stably via the scaled form.
  for (int i = 0; i <= 200; ++i) {
    const double x = 10.0 * i / 200.0;
    double want;
    if (x < 5.0) {
      want = std::exp(x * x) * std::erfc(x);
    } else {
      // continued-fraction-free asymptotic for erfcx at large x
      double s = 1.0, t = 1.0;
      for (int k = 1; k < 30; ++k) {
        t *= -(2.0 * k - 1.0) / (2.0 * x * x);
        s += t;
      }
      want = s / (x * std::sqrt(M_PI));
    }
    const double got = eval_ml(0.5, 1.0, -x);
    EXPECT_LE(std::fabs(got - want) / want, 1e-10) << "x=" << x;
  }
}

TEST(MittagLeffler, UnitAlphaClosedForms) {
  for (double x : {0.0, 0.3, 1.0, 3.9, 4.1, 10.0, 30.0, 49.0, 51.0, 80.0}) {
    EXPECT_NEAR(eval_ml(1.0, 1.0, -x), std::exp(-x), 1e-12 * std::exp(-x) + 1e-300);
    if (x > 0.0) {
      const double e2 = (1.0 - std::exp(-x)) / x;
      EXPECT_LE(std::fabs(eval_ml(1.0, 2.0, -x) - e2) / e2, 1e-12) << x;
      const double e3 = (std::exp(-x) - 1.0 + x) / (x * x);
      EXPECT_LE(std::fabs(eval_ml(1.0, 3.0, -x) - e3) / e3, 1e-12) << x;
    }
  }
}

TEST(MittagLeffler, ValueAtZero) {
  EXPECT_DOUBLE_EQ(eval_ml(0.4, 2.5, 0.0), 1.0 / std::tgamma(2.5));
  EXPECT_EQ(eval_ml_detailed({0.4, 2.5, 0.0}).regime, MLRegime::Zero);
}

TEST(MittagLeffler, RejectsOutOfRange) {
  EXPECT_THROW(eval_ml(1.5, 1.0, -1.0), ParameterOutOfRange);
  EXPECT_THROW(eval_ml(0.5, 0.0, -1.0), ParameterOutOfRange);
  EXPECT_THROW(eval_ml(0.5, 1.0, 1.0), ParameterOutOfRange);
  EXPECT_THROW(eval_ml(0.5, 1.0, std::nan("")), ParameterOutOfRange);
}

TEST(MittagLeffler, RegimesSwitch) {
  EXPECT_EQ(eval_ml_detailed({0.5, 1.0, -1.0}).regime, MLRegime::Series);
  EXPECT_EQ(eval_ml_detailed({0.5, 1.0, -3.0}).regime, MLRegime::Integral);
  EXPECT_EQ(eval_ml_detailed({0.5, 1.0, -100.0}).regime, MLRegime::Asymptotic);
}

TEST(MittagLeffler, ContinuousAcrossRegimeBoundaries) {
  for (double a : {0.2, 0.5, 0.8}) {
    for (double b : {a, 1.0, 1.6}) {
      for (double w : {2.0, 36.0}) {
        const double x = std::pow(w, a);
        const double lo = eval_ml(a, b, -x * (1 - 1e-13));
        const double hi = eval_ml(a, b, -x * (1 + 1e-13));
        EXPECT_LE(std::fabs(lo - hi), 1e-10 * std::fabs(lo)) << a << " " << b << " " << w;
      }
    }
  }
}

TEST(MittagLeffler, LeadingAsymptoticTerm) {
  const MLQuery q{0.5, 1.0, -1e4};
  EXPECT_NEAR(eval_ml_asymptotic_leading(q), 1e-4 / std::tgamma(0.5), 1e-18);
  EXPECT_THROW(eval_ml_asymptotic_leading({0.5, 1.0, -1.0}), ParameterOutOfRange);
}

TEST(MittagLeffler, WeightedKernelConditions) {
  EXPECT_TRUE(is_cm_params({0.5, 0.8, 0.8, 1.0}));
  EXPECT_FALSE(is_cm_params({0.5, 0.4, 0.4, 1.0}));
  EXPECT_FALSE(is_cm_params({0.5, 1.0, 1.2, 1.0}));
  EXPECT_THROW(eval_weighted({0.5, 1.0, 1.0, 1.0}, 0.0), ParameterOutOfRange);
}
