#include <gtest/gtest.h>

#include <cmath>

#include "fracrelax/relax.hpp"
#include "fracrelax/volterra.hpp"

using namespace fracrelax;

TEST(Picard, MatchesClosedFormForCaputo) {
  const DerivativeSpec spec(0.6, {0.4});
  const GradedGrid g(3.0, 1024, 2.0);
  const VolterraProblem vp{spec, make_rhs("linear:-1"), {1.0}, g};
  auto r = picard_solve(vp);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.residual, 1e-9);
  const auto sol = solve_relaxation({spec, 1.0, {1.0}});
  for (int i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(r.solution.values[i], evaluate_solution(sol, g[i]), 5e-5);
  }
}

TEST(Picard, LogisticStaysBounded) {
  const GradedGrid g(5.0, 512, 1.0);
  const VolterraProblem vp{DerivativeSpec(0.8, {0.2}), make_rhs("logistic:1,2"), {0.1}, g};
  auto r = picard_solve(vp);
  for (double v : r.solution.values) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 2.0);
  }
  EXPECT_GT(r.solution.values.back(), r.solution.values.front());
}

TEST(Picard, ReportsNonConvergence) {
  const GradedGrid g(5.0, 256, 1.0);
  const VolterraProblem vp{DerivativeSpec(0.5, {0.5}), make_rhs("linear:-1"), {1.0}, g,
                           1e-14, 3};
  try {
    picard_solve(vp);
    FAIL() << "expected non-convergence";
  } catch (const PicardNonConvergence& e) {
    EXPECT_EQ(e.last().history.size(), 3u);
  }
}

TEST(Picard, BlowUpIsANumericError) {
  const GradedGrid g(20.0, 256, 1.0);
  const VolterraProblem vp{DerivativeSpec(1.0, {0.0}),
                           [](double, double y) { return y * y * y; }, {1.0}, g, 1e-12, 200};
  EXPECT_THROW(picard_solve(vp), Error);
}

TEST(Rhs, Parsing) {
  EXPECT_DOUBLE_EQ(make_rhs("linear:-2")(0.0, 3.0), -6.0);
  EXPECT_DOUBLE_EQ(make_rhs("logistic:1,2")(0.0, 1.0), 0.5);
  EXPECT_THROW(make_rhs("linear"), ValidationError);
  EXPECT_THROW(make_rhs("linear:x"), ValidationError);
  EXPECT_THROW(make_rhs("cubic:1"), ValidationError);
}
