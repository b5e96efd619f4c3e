#include <gtest/gtest.h>

#include "chernlab/error.hpp"
#include "chernlab/metric.hpp"
#include "oracles.hpp"

using namespace chernlab;

TEST(Catalog, NamesResolve) {
  for (const std::string& name : catalog_metric_names()) {
    std::vector<double> params{2};
    if (name == "poincare_disk") params = {1};
    if (name == "polydisk") params = {1, 2};
    const ChartedHermitianMetric m = catalog_metric(name, params);
    EXPECT_GE(m.dim(), 1) << name;
    const ComplexVector z = m.domain().center_point(m.dim());
    EXPECT_TRUE(m(z).is_positive_definite()) << name;
  }
}

TEST(Catalog, BadNamesAndParams) {
  auto kind = [](const std::string& n, const std::vector<double>& p) {
    try {
      (void)catalog_metric(n, p);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;
  };
  EXPECT_EQ(kind("klein_bottle", {2}), ErrorKind::UnknownCatalogName);
  EXPECT_EQ(kind("euclidean", {}), ErrorKind::BadParams);
  EXPECT_EQ(kind("euclidean", {1.5}), ErrorKind::BadParams);
  EXPECT_EQ(kind("poincare_disk", {-1}), ErrorKind::BadParams);
  EXPECT_EQ(kind("polydisk", {1, 0}), ErrorKind::BadParams);
  EXPECT_EQ(kind("hopf", {2, 2, 1}), ErrorKind::BadParams);
}

TEST(Catalog, MatchesOracleMetrics) {
  oracle::Gen gen(21);
  const ChartedHermitianMetric fs = catalog_metric("fubini_study", {3});
  const ChartedHermitianMetric hyp = catalog_metric("complex_hyperbolic", {3});
  for (int t = 0; t < 20; ++t) {
    const ComplexVector z = gen.in_shell(3, 0.0, 0.9);
    EXPECT_LT((fs(z).matrix() - oracle::fs_metric(z)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((hyp(z).matrix() - oracle::hyperbolic_metric(z)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Catalog, ScaledMetric) {
  const ChartedHermitianMetric p = catalog_metric("poincare_disk", {1});
  const ChartedHermitianMetric p3 = p.scaled(3.0);
  ComplexVector z(1);
  z << Complex(0.2, 0.3);
  EXPECT_NEAR(p3(z)(0, 0).real(), 3.0 * p(z)(0, 0).real(), 1e-14);
  EXPECT_THROW((void)p.scaled(0.0), Error);
}

TEST(Domain, Margins) {
  ComplexVector z(2);
  z << Complex(0.3, 0.4), 0.0;
  EXPECT_NEAR(Domain::ball(1.0).margin(z), 0.5, 1e-15);
  EXPECT_NEAR(Domain::box(1.0).margin(z), 0.6, 1e-15);
  EXPECT_NEAR(Domain::polydisk(1.0).margin(z), 0.5, 1e-15);
  EXPECT_NEAR(Domain::annulus(0.25, 2.0).margin(z), 0.25, 1e-15);
  EXPECT_TRUE(std::isinf(Domain::unbounded().margin(z)));
  EXPECT_FALSE(Domain::ball(0.4).contains(z));
}

TEST(Derivatives, DomainMarginEnforced) {
  const ChartedHermitianMetric p = catalog_metric("poincare_disk", {1});
  ComplexVector z(1);
  z << 0.9999;
  try {
    (void)metric_derivatives(p, z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainMarginError);
  }
}

TEST(Derivatives, FirstDerivativesOfFubiniStudy) {
  // d_i g_{k lbar} = -(delta_kl conj(z_i) + delta_il conj(z_k)) / s^2 + 2 conj(z_i) conj(z_k) z_l / s^3.
  oracle::Gen gen(22);
  const ChartedHermitianMetric fs = catalog_metric("fubini_study", {2});
  for (int t = 0; t < 10; ++t) {
    const ComplexVector z = gen.in_shell(2, 0.1, 1.2);
    const MetricDerivatives d = metric_derivatives(fs, z);
    const double s = 1.0 + z.squaredNorm();
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const Complex want = -((k == l ? 1.0 : 0.0) * std::conj(z(i)) + (i == l ? 1.0 : 0.0) * std::conj(z(k))) / (s * s) +
                               2.0 * std::conj(z(i)) * std::conj(z(k)) * z(l) / (s * s * s);
          EXPECT_NEAR(std::abs(d.dg[i](k, l) - want), 0.0, 1e-8);
        }
    EXPECT_LT(derivative_hermitian_residue(d), 1e-9);
    EXPECT_LT(kahler_residue(d), 1e-9);
    EXPECT_GT(d.error_estimate, 0.0);
  }
}

TEST(Derivatives, HopfIsNotKahler) {
  const ChartedHermitianMetric h = catalog_metric("hopf", {2});
  ComplexVector z(2);
  z << Complex(0.7, 0.2), Complex(-0.4, 0.5);
  EXPECT_GT(kahler_residue(metric_derivatives(h, z)), 1e-2);
}
