#include <gtest/gtest.h>

#include "fracrelax/specparams.hpp"

using namespace fracrelax;

TEST(DerivativeSpec, PartialSumsAndSigma) {
  DerivativeSpec s(0.5, {0.3, 0.9});
  EXPECT_EQ(s.n(), 2);
  auto ps = s.partial_sums();
  EXPECT_DOUBLE_EQ(ps[0], 0.3);
  EXPECT_DOUBLE_EQ(ps[1], 1.2);
  auto sig = s.sigma();
  EXPECT_NEAR(sig[0], -0.2, 1e-15);
  EXPECT_NEAR(sig[1], -0.3, 1e-15);
  EXPECT_NEAR(s.inner_order(), 2 - 0.5 - 1.2, 1e-15);
}

TEST(DerivativeSpec, RejectsBadStructure) {
  EXPECT_THROW(require_valid(DerivativeSpec(0.0, {0.5})), ValidationError);
  EXPECT_THROW(require_valid(DerivativeSpec(1.2, {0.5})), ValidationError);
  EXPECT_THROW(require_valid(DerivativeSpec(0.5, {})), ValidationError);
  EXPECT_THROW(require_valid(DerivativeSpec(0.5, {-0.1})), ValidationError);
}

TEST(Validate, Conditions) {
  EXPECT_TRUE(validate(DerivativeSpec(0.5, {0.5})).valid);
  EXPECT_FALSE(validate(DerivativeSpec(0.5, {0.6})).valid);
  EXPECT_THROW(require_valid(DerivativeSpec(0.5, {0.6})), ValidationError);

  auto r = validate(DerivativeSpec(0.5, {0.3, 0.9}));
  EXPECT_TRUE(r.valid);
  EXPECT_TRUE(r.truly_nth_level);
  EXPECT_TRUE(r.cm_admissible);

  // alpha + s_2 = 1 is not beyond level 1.
  EXPECT_FALSE(validate(DerivativeSpec(0.5, {0.2, 0.3})).truly_nth_level);
  // gamma_2 = 1 is a merge.
  EXPECT_FALSE(validate(DerivativeSpec(0.5, {0.2, 1.0})).truly_nth_level);
  // s_2 = 0.7 < 1 breaks the monotonicity condition.
  auto nc = validate(DerivativeSpec(0.5, {0.1, 0.6}));
  EXPECT_TRUE(nc.truly_nth_level);
  EXPECT_FALSE(nc.cm_admissible);
}

TEST(Classify, FirstLevelFamilies) {
  EXPECT_EQ(classify(DerivativeSpec(0.7, {0.0})).kind, SpecKind::RiemannLiouville);
  EXPECT_EQ(classify(DerivativeSpec(0.7, {0.3})).kind, SpecKind::Caputo);
  auto h = classify(DerivativeSpec(0.7, {0.1}));
  EXPECT_EQ(h.kind, SpecKind::Hilfer);
  EXPECT_NEAR(h.hilfer_type(), 0.1, 1e-15);
}

TEST(Classify, MergeReducesToHilfer) {
  auto c = classify(DerivativeSpec(0.6, {0.1, 1.0}));
  EXPECT_TRUE(c.reduced);
  EXPECT_EQ(c.effective.n(), 1);
  EXPECT_NEAR(c.effective.gamma()[0], 0.1, 1e-14);
  EXPECT_EQ(label(c), "Hilfer(0.1)");
}

TEST(Classify, LowSumDropsInnerFactor) {
  auto c = classify(DerivativeSpec(0.4, {0.2, 0.3}));
  EXPECT_TRUE(c.reduced);
  EXPECT_EQ(c.effective.n(), 1);
  EXPECT_NEAR(c.effective.gamma()[0], 0.2, 1e-14);
  ASSERT_EQ(c.surviving.size(), 1u);
  EXPECT_EQ(c.surviving[0], 0);
}

TEST(Classify, TrulySecondLevel) {
  auto c = classify(DerivativeSpec(0.5, {0.3, 0.9}));
  EXPECT_FALSE(c.reduced);
  EXPECT_EQ(c.kind, SpecKind::TrulyNthLevel);
  EXPECT_EQ(c.surviving.size(), 2u);
}

TEST(Triangle, Regions) {
  const double a = 0.5;
  EXPECT_EQ(triangle_region(DerivativeSpec(a, {0.0, 1.0})), RegionLabel::RLVertex);
  EXPECT_EQ(triangle_region(DerivativeSpec(a, {0.5, 1.0})), RegionLabel::CaputoVertex);
  EXPECT_EQ(triangle_region(DerivativeSpec(a, {0.5, 0.5})), RegionLabel::Truly2LVertex);
  EXPECT_EQ(triangle_region(DerivativeSpec(a, {0.2, 1.0})), RegionLabel::HilferEdge);
  EXPECT_EQ(triangle_region(DerivativeSpec(a, {0.5, 0.7})), RegionLabel::Truly2LEdgeGamma1);
  EXPECT_EQ(triangle_region(DerivativeSpec(a, {0.3, 0.7})), RegionLabel::Truly2LEdgeGamma2);
  EXPECT_EQ(triangle_region(DerivativeSpec(a, {0.3, 0.9})), RegionLabel::Interior);
  EXPECT_EQ(triangle_region(DerivativeSpec(a, {0.1, 0.6})), RegionLabel::OutsideTriangle);
  EXPECT_THROW(triangle_region(DerivativeSpec(a, {0.5})), ValidationError);
}

TEST(KernelBasis, ExponentsAreSigma) {
  DerivativeSpec s(0.5, {0.3, 0.9});
  auto b = kernel_basis(s);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_NEAR(*b[0].min_exponent(), -0.2, 1e-14);
  EXPECT_NEAR(*b[1].min_exponent(), -0.3, 1e-14);
}

TEST(LaplaceForm, CaputoInitialPart) {
  DerivativeSpec s(0.5, {0.5});
  auto form = laplace_form(s, {2.0});
  // s^alpha F - a s^{alpha - 1}
  EXPECT_NEAR(form.apply(4.0, 1.0), 2.0 - 2.0 * 0.5, 1e-14);
}
