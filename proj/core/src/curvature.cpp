#include "chernlab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chernlab/error.hpp"

namespace chernlab {

namespace {

double max_abs(const std::vector<ComplexMatrix>& ms) {
  double m = 0.0;
  for (const auto& a : ms) m = std::max(m, a.cwiseAbs().maxCoeff());
  return m;
}

double absolute_conjugation_residue(const ChernCurvatureTensor& R) {
  const int n = R.dim();
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) r = std::max(r, std::abs(R(i, j, k, l) - std::conj(R(j, i, l, k))));
  return r;
}

}  // namespace

double curvature_error_estimate(const MetricDerivatives& d) {
  const double n = d.n;
  const double ginv = hermitian_inverse(d.g).matrix().cwiseAbs().maxCoeff();
  const double e1 = d.first_error_estimate;
  const double dmax = std::max(max_abs(d.dg), max_abs(d.dbar_g));
  return d.second_error_estimate + n * n * ginv * (2.0 * dmax * e1 + e1 * e1);
}

ChernCurvatureTensor chern_curvature(const MetricDerivatives& d) {
  const int n = d.n;
  if (!d.g.is_positive_definite()) {
    throw Error(ErrorKind::NotPositiveDefinite, "metric is not positive-definite at the point");
  }
  const ComplexMatrix ginv = hermitian_inverse(d.g).matrix();
  ChernCurvatureTensor R(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // (dg_i G^{-1} dbar_j)(k, l) = sum_{q,p} d_i g_{k qbar} (G^{-1})_{q p} dbar_j g_{p lbar},
      // and (G^{-1})_{q p} is exactly g^{p qbar}.
      const ComplexMatrix quad = d.dg[i] * ginv * d.dbar_g[j];
      const ComplexMatrix& dd = d.ddbar(i, j);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) R(i, j, k, l) = -dd(k, l) + quad(k, l);
    }
  }

  const double residue = absolute_conjugation_residue(R);
  const double allowed = 100.0 * curvature_error_estimate(d) + 1e-12 * std::max(1.0, R.max_abs());
  if (!std::isfinite(residue) || residue > allowed) {
    throw Error(ErrorKind::FiniteDifferenceInconsistency,
                "curvature conjugation residue " + std::to_string(residue) +
                    " exceeds the stencil error budget " + std::to_string(allowed));
  }
  return R;
}

ChernCurvatureTensor chern_curvature(const ChartedHermitianMetric& m, const ComplexVector& z,
                                     std::optional<double> step) {
  return chern_curvature(metric_derivatives(m, z, step));
}

HermitianForm ricci(const ChernCurvatureTensor& R, const HermitianForm& g, int kind) {
  const int n = R.dim();
  if (g.dim() != n) throw Error(ErrorKind::DimensionMismatch, "ricci: metric and tensor sizes differ");
  if (kind < 1 || kind > 3) throw Error(ErrorKind::BadIndices, "ricci kind must be 1, 2 or 3");
  const ComplexMatrix ginv = hermitian_inverse(g).matrix();
  // g^{a bbar} = ginv(b, a)
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Complex r = R(i, j, k, l);
          switch (kind) {
            case 1: out(i, j) += ginv(l, k) * r; break;
            case 2: out(k, l) += ginv(j, i) * r; break;
            default: out(k, j) += ginv(l, i) * r; break;
          }
        }
  return HermitianForm(out);
}

double hsc(const ChernCurvatureTensor& R, const HermitianForm& g, const ComplexVector& v) {
  const int n = R.dim();
  if (g.dim() != n || v.size() != n) throw Error(ErrorKind::DimensionMismatch, "hsc");
  const double norm2 = g.evaluate(v);
  if (!(v.cwiseAbs().maxCoeff() > 0.0) || !(norm2 > 0.0)) {
    throw Error(ErrorKind::ZeroVector, "holomorphic sectional curvature of the zero vector");
  }
  Complex s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex vij = v(i) * std::conj(v(j));
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += R(i, j, k, l) * vij * v(k) * std::conj(v(l));
    }
  return s.real() / (norm2 * norm2);
}

SymmetryCheck kahler_symmetry_check(const ChernCurvatureTensor& R, double tol) {
  const int n = R.dim();
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Complex x = R(i, j, k, l);
          r = std::max({r, std::abs(x - R(k, j, i, l)), std::abs(x - R(i, l, k, j))});
        }
  return {r < tol, r};
}

RealMatrix altered_hsc_matrix(const FrameCurvatureMatrices& fm) { return fm.R_mat + fm.P_mat; }

CurvatureReport curvature_report(const ChartedHermitianMetric& m, const ComplexVector& z,
                                 double symmetry_tol, std::optional<double> step) {
  const MetricDerivatives d = metric_derivatives(m, z, step);
  CurvatureReport rep;
  rep.point = z;
  rep.g = d.g;
  rep.R = chern_curvature(d);
  rep.ric1 = ricci(rep.R, d.g, 1);
  rep.ric2 = ricci(rep.R, d.g, 2);
  rep.ric3 = ricci(rep.R, d.g, 3);
  rep.scal = trace_with(rep.ric1, d.g);
  rep.scal_tilde = trace_with(rep.ric3, d.g);
  rep.kahler = kahler_symmetry_check(rep.R, symmetry_tol);
  rep.error_estimate = curvature_error_estimate(d);
  rep.step = d.step;
  return rep;
}

}  // namespace chernlab
