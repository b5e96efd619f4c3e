#include <gtest/gtest.h>

#include "chernlab/curvature.hpp"
#include "chernlab/schwarz.hpp"
#include "oracles.hpp"

using namespace chernlab;

TEST(SphereMoments, FubiniStudyTargets) {
  const MomentResult a = fs_moment_check(2, {0, 0, 0, 0}, 200000, 1);
  EXPECT_NEAR(a.target, 1.0 / 3.0, 1e-15);
  EXPECT_LT(a.abs_err, 4.0 * a.std_error + 1e-12);
  const MomentResult b = fs_moment_check(2, {0, 0, 1, 1}, 200000, 2);
  EXPECT_NEAR(b.target, 1.0 / 6.0, 1e-15);
  EXPECT_LT(b.abs_err, 4.0 * b.std_error + 1e-12);
  const MomentResult c = fs_moment_check(3, {0, 1, 2, 0}, 200000, 3);
  EXPECT_NEAR(c.target, 0.0, 1e-15);
  EXPECT_LT(c.abs_err, 4.0 * c.std_error + 1e-12);
  // (i, j, k, l) = (1, 2, 2, 1) pairs delta_il delta_kj.
  const MomentResult d = fs_moment_check(2, {0, 1, 1, 0}, 200000, 4);
  EXPECT_NEAR(d.target, 1.0 / 6.0, 1e-15);
}

TEST(SphereMoments, SeedDeterminesTheEstimate) {
  const MomentResult a = fs_moment_check(2, {0, 0, 1, 1}, 20000, 9);
  const MomentResult b = fs_moment_check(2, {0, 0, 1, 1}, 20000, 9);
  EXPECT_EQ(a.estimate, b.estimate);
}

TEST(AveragedHsc, FubiniStudyAtTheOrigin) {
  const ChartedHermitianMetric fs = catalog_metric("fubini_study", {2});
  const ComplexVector z = ComplexVector::Zero(2);
  const ChernCurvatureTensor F = tensor_in_frame(chern_curvature(fs, z), gram_unitary_frame(fs(z)));
  RealVector b(2);
  b << 1.0, 1.0;
  const AveragedHscResult r = averaged_hsc_check(F, b, 400000, 5);
  EXPECT_NEAR(r.rhs, 2.0, 1e-6);
  EXPECT_NEAR(r.rhs_doubled, 2.0 * r.rhs, 1e-12);
  EXPECT_LT(std::abs(r.lhs - r.rhs), 4.0 * r.std_error + 1e-6);
}

TEST(AveragedHsc, HopfWithUnequalWeights) {
  oracle::Gen gen(401);
  const ChartedHermitianMetric h = catalog_metric("hopf", {3});
  const ComplexVector z = gen.in_shell(3, 0.8, 1.5);
  const ChernCurvatureTensor F = tensor_in_frame(chern_curvature(h, z), gram_unitary_frame(h(z)));
  RealVector b(3);
  b << 0.5, 1.0, 1.5;
  const AveragedHscResult r = averaged_hsc_check(F, b, 400000, 6);
  EXPECT_LT(std::abs(r.lhs - r.rhs), 4.0 * r.std_error + 1e-9);
}

TEST(AntisymmetricSample, HasTheRequiredSymmetries) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ChernCurvatureTensor R = antisymmetric_curvature_sample(3, seed);
    EXPECT_LT(R.conjugation_residue(), 1e-14);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) {
            if (i == j && j == k && k == l) {
              EXPECT_NEAR(R(i, i, i, i).imag(), 0.0, 1e-15);
              continue;
            }
            EXPECT_NEAR(std::abs(R(i, j, k, l) + R(k, l, i, j)), 0.0, 1e-14);
          }
  }
}

TEST(Theorem23, FactorTwoAndSigmaFormsHold) {
  const Theorem23Result r = theorem23_check(3, 100, 7, 1e-10);
  EXPECT_LT(r.sigma_discrepancy, 1e-10);
  EXPECT_LT(r.multiple_discrepancy, 1e-10);
  EXPECT_LT(r.rbc_discrepancy, 1e-10);
  EXPECT_TRUE(r.multiple_holds);
  // With nonzero all-equal entries, P + R is twice R rather than equal to it.
  EXPECT_FALSE(r.literal_holds);
  EXPECT_GT(r.literal_discrepancy, 1e-3);
}

TEST(Theorem23, ZeroDiagonalMakesTheLiteralFormHold) {
  const Theorem23Result r = theorem23_check(3, 100, 8, 1e-10, true);
  EXPECT_TRUE(r.literal_holds);
  EXPECT_LT(r.literal_discrepancy, 1e-10);
}
