#include <gtest/gtest.h>

#include "chernlab/cone.hpp"
#include "chernlab/curvature.hpp"
#include "chernlab/error.hpp"
#include "oracles.hpp"

using namespace chernlab;

namespace {

RealMatrix mat2(double a, double b, double c, double d) {
  RealMatrix M(2, 2);
  M << a, b, c, d;
  return M;
}

double quotient(const RealMatrix& M, const RealVector& v) { return v.dot(M * v) / v.squaredNorm(); }

// Brute force over the simplex grid x_1 + x_2 + x_3 = 1 at resolution k.
std::pair<double, double> simplex_grid_3(const RealMatrix& M, int k) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; a + b <= k; ++b) {
      RealVector v(3);
      v << a, b, k - a - b;
      const double q = quotient(M, v);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  return {lo, hi};
}

RealVector ordered_positive(oracle::Gen& gen, int n) {
  RealVector v(n);
  v(n - 1) = 1.0;
  for (int i = n - 2; i >= 0; --i) v(i) = v(i + 1) * std::exp(gen.uniform(0.0, 2.0));
  return v;
}

}  // namespace

TEST(OrthantExtrema, TwoByTwoExamples) {
  OrthantExtremum e = orthant_rayleigh_extrema(mat2(2, 1, 1, 2));
  EXPECT_NEAR(e.min_val, 2.0, 1e-12);
  EXPECT_NEAR(e.max_val, 3.0, 1e-12);
  EXPECT_EQ(e.method, OrthantExtremum::Method::ExactFacial);
  e = orthant_rayleigh_extrema(mat2(0, -3, -3, 0));
  EXPECT_NEAR(e.min_val, -3.0, 1e-12);
  EXPECT_NEAR(e.max_val, 0.0, 1e-12);
  EXPECT_EQ(e.min_face.size(), 2u);
  EXPECT_EQ(e.max_face.size(), 1u);
}

TEST(OrthantExtrema, OnlySymmetricPartMatters) {
  oracle::Gen gen(201);
  for (int t = 0; t < 20; ++t) {
    RealMatrix A(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A(i, j) = gen.normal();
    const OrthantExtremum a = orthant_rayleigh_extrema(A);
    const OrthantExtremum s = orthant_rayleigh_extrema(0.5 * (A + A.transpose()));
    EXPECT_NEAR(a.min_val, s.min_val, 1e-12);
    EXPECT_NEAR(a.max_val, s.max_val, 1e-12);
  }
}

TEST(OrthantExtrema, ExactAgreesWithSimplexBruteForce) {
  oracle::Gen gen(202);
  for (int t = 0; t < 40; ++t) {
    const RealMatrix M = gen.symmetric(3);
    const OrthantExtremum e = orthant_rayleigh_extrema(M);
    const auto [lo, hi] = simplex_grid_3(M, 200);
    // The exact values bound the grid values and are close to them.
    EXPECT_LE(e.min_val, lo + 1e-12);
    EXPECT_GE(e.max_val, hi - 1e-12);
    EXPECT_LT(lo - e.min_val, 1e-3);
    EXPECT_LT(e.max_val - hi, 1e-3);
  }
}

TEST(OrthantExtrema, ArgumentsAttainTheValues) {
  oracle::Gen gen(203);
  for (int t = 0; t < 40; ++t) {
    const int n = gen.integer(1, 6);
    const RealMatrix M = gen.symmetric(n);
    const OrthantExtremum e = orthant_rayleigh_extrema(M);
    EXPECT_GE(e.argmin.minCoeff(), -1e-15);
    EXPECT_GE(e.argmax.minCoeff(), -1e-15);
    EXPECT_NEAR(quotient(M, e.argmin), e.min_val, 1e-10);
    EXPECT_NEAR(quotient(M, e.argmax), e.max_val, 1e-10);
    // Never beats the unconstrained spectrum.
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(M);
    EXPECT_GE(e.min_val, es.eigenvalues()(0) - 1e-10);
    EXPECT_LE(e.max_val, es.eigenvalues()(n - 1) + 1e-10);
  }
}

TEST(OrthantExtrema, MultistartMatchesExactInLowDimension) {
  oracle::Gen gen(204);
  for (int t = 0; t < 20; ++t) {
    const int n = gen.integer(2, 4);
    const RealMatrix M = gen.symmetric(n);
    const OrthantExtremum e = orthant_rayleigh_extrema(M);
    const OrthantExtremum m = orthant_rayleigh_extrema_multistart(M, 64, 7 + t);
    EXPECT_EQ(m.method, OrthantExtremum::Method::Multistart);
    EXPECT_NEAR(m.min_val, e.min_val, 1e-6);
    EXPECT_NEAR(m.max_val, e.max_val, 1e-6);
  }
}

TEST(OrthantExtrema, HornMatrixIsCopositiveWithZeroMinimum) {
  // The Horn form is copositive but not a sum of PSD and nonnegative parts.
  RealMatrix H(5, 5);
  H << 1, -1, 1, 1, -1,
      -1, 1, -1, 1, 1,
       1, -1, 1, -1, 1,
       1, 1, -1, 1, -1,
      -1, 1, 1, -1, 1;
  const OrthantExtremum e = orthant_rayleigh_extrema(H);
  EXPECT_EQ(e.method, OrthantExtremum::Method::Multistart);
  EXPECT_GT(e.min_val, -1e-8);
  EXPECT_LT(e.min_val, 1e-6);
}

TEST(OrthantExtrema, Errors) {
  try {
    (void)orthant_rayleigh_extrema(RealMatrix(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionError);
  }
  RealMatrix M = RealMatrix::Identity(2, 2);
  M(0, 1) = std::numeric_limits<double>::infinity();
  try {
    (void)orthant_rayleigh_extrema(M);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFiniteValue);
  }
}

TEST(Sbc, SpaceFormMatrices) {
  const SbcResult fs = sbc_infimum(mat2(2, 1, 1, 2));
  EXPECT_EQ(fs.status, SbcResult::Status::Finite);
  EXPECT_NEAR(fs.inf_val, 6.0, 1e-6);
  EXPECT_NEAR(fs.margin, 0.5, 1e-6);
  const SbcResult hyp = sbc_infimum(mat2(-2, -1, -1, -2));
  EXPECT_EQ(hyp.status, SbcResult::Status::UnboundedBelow);
  EXPECT_EQ(hyp.gap_index, 1);
  EXPECT_LT(sbc_certificate_value(mat2(-2, -1, -1, -2), hyp, 20.0), -1e6);
  EXPECT_EQ(to_string(hyp.status), "unbounded_below");
}

TEST(Sbc, DiagonalMatricesGiveTheTrace) {
  oracle::Gen gen(205);
  for (int t = 0; t < 10; ++t) {
    const int n = gen.integer(1, 5);
    RealMatrix M = RealMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) M(i, i) = gen.normal();
    const SbcResult r = sbc_infimum(M);
    EXPECT_EQ(r.status, SbcResult::Status::Finite);
    EXPECT_NEAR(r.inf_val, M.trace(), 1e-9);
  }
}

TEST(Sbc, ScaleInvariance) {
  oracle::Gen gen(206);
  for (int t = 0; t < 30; ++t) {
    const int n = gen.integer(1, 5);
    const RealMatrix M = gen.symmetric(n);
    const RealVector v = ordered_positive(gen, n);
    const double c = std::exp(gen.uniform(-3.0, 3.0));
    EXPECT_NEAR(sbc_value(M, c * v), sbc_value(M, v), 1e-9 * std::max(1.0, std::abs(sbc_value(M, v))));
  }
}

TEST(Sbc, InfimumIsNotAboveSampledValues) {
  oracle::Gen gen(207);
  for (int t = 0; t < 30; ++t) {
    const int n = gen.integer(2, 4);
    RealMatrix M = gen.symmetric(n);
    M.diagonal().array() += 2.0;
    M = M.cwiseAbs();  // nonnegative entries keep the infimum finite
    const SbcResult r = sbc_infimum(M);
    ASSERT_EQ(r.status, SbcResult::Status::Finite);
    EXPECT_NEAR(sbc_value(M, r.arg), r.inf_val, 1e-9 * std::max(1.0, std::abs(r.inf_val)));
    for (int s = 0; s < 50; ++s) {
      const RealVector v = ordered_positive(gen, n);
      EXPECT_LE(r.inf_val, sbc_value(M, v) + 1e-7);
    }
  }
}

TEST(Sbc, CertificatesDivergeWhenUnbounded) {
  oracle::Gen gen(208);
  int unbounded = 0;
  for (int t = 0; t < 60; ++t) {
    const int n = gen.integer(2, 4);
    const RealMatrix M = gen.symmetric(n);
    const SbcResult r = sbc_infimum(M);
    if (r.status != SbcResult::Status::UnboundedBelow) continue;
    ++unbounded;
    ASSERT_GE(r.gap_index, 1);
    ASSERT_LT(r.gap_index, n);
    const double v0 = sbc_certificate_value(M, r, 0.0);
    const double v20 = sbc_certificate_value(M, r, 20.0);
    EXPECT_LT(v20, v0);
    EXPECT_LT(v20, -1e6) << M;
  }
  EXPECT_GT(unbounded, 5);
}

TEST(Sbc, AlongMap) {
  RealVector lambda(2);
  lambda << 2.0, 1.0;
  // 2 + 2 + 1 * 1/4 + 1 * 4 = 8.25
  EXPECT_NEAR(sbc_along_map(mat2(2, 1, 1, 2), lambda), 8.25, 1e-12);
  lambda << 1.0, 2.0;
  EXPECT_THROW((void)sbc_along_map(mat2(2, 1, 1, 2), lambda), Error);
  lambda << 1.0, 0.0;
  try {
    (void)sbc_along_map(mat2(2, 1, 1, 2), lambda);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroSingularValue);
  }
}

TEST(Rbc, ModelMetricsAtTheOrigin) {
  const ChartedHermitianMetric fs = catalog_metric("fubini_study", {2});
  const ChartedHermitianMetric hyp = catalog_metric("complex_hyperbolic", {2});
  const ComplexVector z = ComplexVector::Zero(2);
  const RbcBounds a = rbc_bounds(chern_curvature(fs, z), fs(z));
  EXPECT_NEAR(a.inf, 2.0, 1e-6);
  EXPECT_NEAR(a.sup, 3.0, 1e-6);
  EXPECT_TRUE(a.heuristic);
  const RbcBounds b = rbc_bounds(chern_curvature(hyp, z), hyp(z));
  EXPECT_NEAR(b.inf, -3.0, 1e-6);
  EXPECT_NEAR(b.sup, -2.0, 1e-6);
  const SbcFrameResult s = sbc_bound(chern_curvature(fs, z), fs(z));
  EXPECT_NEAR(s.best.inf_val, 6.0, 1e-6);
  EXPECT_EQ(sbc_bound(chern_curvature(hyp, z), hyp(z)).best.status, SbcResult::Status::UnboundedBelow);
}

TEST(Rbc, OneDimensionIsExact) {
  const ChartedHermitianMetric p = catalog_metric("poincare_disk", {2.0});
  ComplexVector z(1);
  z << Complex(0.3, -0.2);
  const RbcBounds r = rbc_bounds(chern_curvature(p, z), p(z));
  EXPECT_FALSE(r.heuristic);
  EXPECT_NEAR(r.inf, -1.0, 1e-6);  // -2 / a
  EXPECT_NEAR(r.sup, -1.0, 1e-6);
}

TEST(Rbc, SpaceFormIsFrameIndependent) {
  // Every unitary frame of a space form sees the same frame matrix.
  oracle::Gen gen(209);
  const ComplexVector z = gen.in_shell(3, 0.2, 0.9);
  const HermitianForm g(oracle::fs_metric(z));
  const ChernCurvatureTensor R = oracle::fs_curvature(z);
  double lo_min = 1e300, lo_max = -1e300, hi_min = 1e300, hi_max = -1e300;
  for (int t = 0; t < 50; ++t) {
    const UnitaryFrame e = gram_unitary_frame(g).rotated(gen.unitary(3));
    const OrthantExtremum x = orthant_rayleigh_extrema(curvature_in_frame(R, e).R_mat);
    lo_min = std::min(lo_min, x.min_val);
    lo_max = std::max(lo_max, x.min_val);
    hi_min = std::min(hi_min, x.max_val);
    hi_max = std::max(hi_max, x.max_val);
  }
  EXPECT_LT(lo_max - lo_min, 1e-6);
  EXPECT_LT(hi_max - hi_min, 1e-6);
  EXPECT_NEAR(lo_min, 2.0, 1e-9);
  EXPECT_NEAR(hi_min, 4.0, 1e-9);  // (2 * 3 + 6) / 3
}

TEST(Rbc, SearchIsDeterministicGivenSeed) {
  const ChartedHermitianMetric h = catalog_metric("hopf", {2});
  ComplexVector z(2);
  z << Complex(0.7, 0.1), Complex(0.3, -0.6);
  FrameSearchConfig cfg;
  cfg.seed = 42;
  const RbcBounds a = rbc_bounds(chern_curvature(h, z), h(z), cfg);
  const RbcBounds b = rbc_bounds(chern_curvature(h, z), h(z), cfg);
  EXPECT_EQ(a.inf, b.inf);
  EXPECT_EQ(a.sup, b.sup);
  EXPECT_LE(a.inf, a.sup);
}
