#include <gtest/gtest.h>

#include "chernlab/curvature.hpp"
#include "chernlab/error.hpp"
#include "chernlab/expression.hpp"
#include "oracles.hpp"

using namespace chernlab;

namespace {

ComplexVector pt(std::initializer_list<Complex> c) {
  ComplexVector z(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (Complex x : c) z(i++) = x;
  return z;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::IoError;
}

}  // namespace

TEST(Expression, Arithmetic) {
  const ComplexVector z = pt({Complex(0.5, -0.25), Complex(2.0, 1.0)});
  EXPECT_NEAR(std::abs(parse_expression("1 + 2*3 - 4/2").evaluate(z) - 5.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(parse_expression("2^10").evaluate(z) - 1024.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(parse_expression("z1*z2").evaluate(z) - z(0) * z(1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(parse_expression("conj(z1)").evaluate(z) - std::conj(z(0))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(parse_expression("abs2(z2)").evaluate(z) - 5.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(parse_expression("re(z1) + i*im(z1)").evaluate(z) - z(0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(parse_expression("exp(log(z2))").evaluate(z) - z(1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(parse_expression("-z1^-2").evaluate(z) + 1.0 / (z(0) * z(0))), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(parse_expression("1.5e-1 * (z1 + z2)").evaluate(z) - 0.15 * (z(0) + z(1))), 0.0, 1e-15);
  EXPECT_EQ(parse_expression("z1 + z2").max_variable(), 2);
  EXPECT_EQ(parse_expression("3").max_variable(), 0);
}

TEST(Expression, ParseErrorsCarryLocation) {
  try {
    (void)parse_expression("1 + * 2");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 1, column 5"), std::string::npos) << e.what();
  }
  EXPECT_EQ(kind_of([] { (void)parse_expression("sin(z1)"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { (void)parse_expression("(z1"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { (void)parse_expression("z0"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { (void)parse_expression(""); }), ErrorKind::ParseError);
}

TEST(Expression, MultiLineTableReportsLine) {
  try {
    (void)parse_metric_expression("g[1][1] = 1\ng[2][2] = 1 +\n", 2, Domain::ball(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Expression, VariableBeyondDimension) {
  EXPECT_EQ(kind_of([] { (void)parse_metric_expression("g[1][1] = 1 + abs2(z2)", 1); }), ErrorKind::ParseError);
  const ComplexVector z = pt({Complex(0.1, 0.0)});
  EXPECT_EQ(kind_of([&] { (void)parse_expression("z3").evaluate(z); }), ErrorKind::DimensionMismatch);
}

TEST(Expression, MetricTableMatchesCatalog) {
  const std::string src =
      "# Fubini-Study in the affine chart\n"
      "g[1][1] = 1/(1 + abs2(z1) + abs2(z2)) - abs2(z1)/(1 + abs2(z1) + abs2(z2))^2\n"
      "g[1][2] = -conj(z1)*z2/(1 + abs2(z1) + abs2(z2))^2\n"
      "g[2][2] = 1/(1 + abs2(z1) + abs2(z2)) - abs2(z2)/(1 + abs2(z1) + abs2(z2))^2\n";
  const ChartedHermitianMetric m = parse_metric_expression(src, 2, Domain::ball(2.0));
  const ChartedHermitianMetric fs = catalog_metric("fubini_study", {2});
  oracle::Gen gen(31);
  for (int t = 0; t < 10; ++t) {
    const ComplexVector z = gen.in_shell(2, 0.0, 1.5);
    EXPECT_LT((m(z).matrix() - fs(z).matrix()).cwiseAbs().maxCoeff(), 1e-14);
  }
  const ComplexVector z = pt({Complex(0.3, 0.1), Complex(-0.2, 0.4)});
  EXPECT_LT(oracle::relative_error(chern_curvature(m, z), oracle::fs_curvature(z)), 1e-6);
}

TEST(Expression, SemicolonsAndBareScalar) {
  const ChartedHermitianMetric a = parse_metric_expression("g[1][1] = 2; g[2][2] = 3", 2);
  const ComplexVector z = pt({0.0, 0.0});
  EXPECT_NEAR(a(z)(1, 1).real(), 3.0, 1e-15);
  EXPECT_NEAR(std::abs(a(z)(0, 1)), 0.0, 1e-15);
  const ChartedHermitianMetric b = parse_metric_expression("1/(1 - abs2(z1))^2", 1);
  EXPECT_NEAR(b(pt({0.5})).matrix()(0, 0).real(), 1.0 / (0.75 * 0.75), 1e-14);
}

TEST(Expression, RejectsNonHermitianAndIndefinite) {
  EXPECT_EQ(kind_of([] { (void)parse_metric_expression("g[1][1] = 1 + i", 1); }), ErrorKind::NonHermitianExpression);
  EXPECT_EQ(kind_of([] { (void)parse_metric_expression("g[1][1] = 1; g[1][2] = z1; g[2][1] = z1; g[2][2] = 1", 2); }),
            ErrorKind::NonHermitianExpression);
  EXPECT_EQ(kind_of([] { (void)parse_metric_expression("g[1][1] = -1", 1); }), ErrorKind::EvaluationDomainError);
  EXPECT_EQ(kind_of([] { (void)parse_metric_expression("g[1][1] = 1/abs2(z1)", 1, Domain::ball(1.0)); }),
            ErrorKind::EvaluationDomainError);
}

TEST(Expression, MissingDiagonalAndBadHeader) {
  EXPECT_EQ(kind_of([] { (void)parse_metric_expression("g[1][1] = 1", 2); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { (void)parse_metric_expression("g[3][1] = 1; g[1][1] = 1", 2); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { (void)parse_metric_expression("h[1][1] = 1; g[1][1] = 1", 1); }), ErrorKind::ParseError);
}
