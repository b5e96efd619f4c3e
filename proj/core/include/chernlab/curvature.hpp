#pragma once

#include <optional>

#include "chernlab/metric.hpp"
#include "chernlab/tensor.hpp"

namespace chernlab {

// R_{i jbar k lbar} = -d_i dbar_j g_{k lbar} + g^{p qbar} d_i g_{k qbar} dbar_j g_{p lbar}.
// Throws FiniteDifferenceInconsistency if the assembled tensor violates
// conjugation symmetry by far more than the stencil error predicts.
ChernCurvatureTensor chern_curvature(const MetricDerivatives& d);
ChernCurvatureTensor chern_curvature(const ChartedHermitianMetric& m, const ComplexVector& z,
                                     std::optional<double> step = std::nullopt);

// Absolute error bound propagated from the metric derivative estimates.
double curvature_error_estimate(const MetricDerivatives& d);

// kind 1: g^{k lbar} R_{i jbar k lbar}   (indexed i, jbar)
// kind 2: g^{i jbar} R_{i jbar k lbar}   (indexed k, lbar)
// kind 3: g^{i lbar} R_{i jbar k lbar}   (indexed k, jbar)
HermitianForm ricci(const ChernCurvatureTensor& R, const HermitianForm& g, int kind);

double hsc(const ChernCurvatureTensor& R, const HermitianForm& g, const ComplexVector& v);

struct SymmetryCheck {
  bool holds = false;
  double residue = 0.0;
};
SymmetryCheck kahler_symmetry_check(const ChernCurvatureTensor& R, double tol);

// Q = R_mat + P_mat.
RealMatrix altered_hsc_matrix(const FrameCurvatureMatrices& fm);

struct CurvatureReport {
  ComplexVector point;
  HermitianForm g;
  ChernCurvatureTensor R;
  HermitianForm ric1, ric2, ric3;
  double scal = 0.0;
  double scal_tilde = 0.0;
  SymmetryCheck kahler;
  double error_estimate = 0.0;
  double step = 0.0;
};

CurvatureReport curvature_report(const ChartedHermitianMetric& m, const ComplexVector& z,
                                 double symmetry_tol = 1e-6,
                                 std::optional<double> step = std::nullopt);

}  // namespace chernlab
