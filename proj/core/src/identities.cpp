#include <algorithm>
#include <cmath>
#include <random>

#include "chernlab/curvature.hpp"
#include "chernlab/error.hpp"
#include "chernlab/schwarz.hpp"

namespace chernlab {

namespace {

// Uniform point on the unit sphere of C^n.
ComplexVector sphere_point(std::mt19937_64& rng, std::normal_distribution<double>& gauss, int n) {
  ComplexVector w(n);
  for (int i = 0; i < n; ++i) w(i) = Complex(gauss(rng), gauss(rng));
  return w / w.norm();
}

}  // namespace

MomentResult fs_moment_check(int n, std::array<int, 4> idx, long n_samples, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::DimensionError, "moment check needs n >= 1");
  for (int i : idx)
    if (i < 0 || i >= n) throw Error(ErrorKind::BadIndices, "moment index out of range");
  if (n_samples < 2) throw Error(ErrorKind::BadParams, "moment check needs at least two samples");
  const auto [i, j, k, l] = idx;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Complex sum = 0.0;
  double sq = 0.0;
  for (long s = 0; s < n_samples; ++s) {
    const ComplexVector w = sphere_point(rng, gauss, n);
    const Complex x = w(i) * std::conj(w(j)) * w(k) * std::conj(w(l));
    sum += x;
    sq += std::norm(x);
  }
  const double N = static_cast<double>(n_samples);
  MomentResult out;
  out.estimate = sum / N;
  out.target = ((i == j && k == l ? 1.0 : 0.0) + (i == l && k == j ? 1.0 : 0.0)) / (n * (n + 1.0));
  out.abs_err = std::abs(out.estimate - out.target);
  const double var = std::max(0.0, sq / N - std::norm(out.estimate)) * N / (N - 1.0);
  out.std_error = std::sqrt(var / N);
  out.within_3_sigma = out.abs_err <= 3.0 * out.std_error + 1e-15;
  return out;
}

AveragedHscResult averaged_hsc_check(const ChernCurvatureTensor& R, const RealVector& b, long n_samples,
                                     std::uint64_t seed) {
  const int n = R.dim();
  if (b.size() != n) throw Error(ErrorKind::DimensionMismatch, "averaged HSC weight vector");
  if ((b.array() < 0).any()) throw Error(ErrorKind::BadParams, "weights must be nonnegative");
  if (n_samples < 2) throw Error(ErrorKind::BadParams, "averaged HSC needs at least two samples");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sum = 0.0, sq = 0.0;
  for (long s = 0; s < n_samples; ++s) {
    const ComplexVector x = b.cast<Complex>().cwiseProduct(sphere_point(rng, gauss, n));
    Complex q = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Complex xij = x(i) * std::conj(x(j));
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) q += R(i, j, k, l) * xij * x(k) * std::conj(x(l));
      }
    sum += q.real();
    sq += q.real() * q.real();
  }
  const double N = static_cast<double>(n_samples);
  AveragedHscResult out;
  out.lhs = sum / N;
  const FrameCurvatureMatrices fm = curvature_in_frame(R, UnitaryFrame(ComplexMatrix::Identity(n, n)));
  const RealVector b2 = b.array().square().matrix();
  const double quad = b2.dot(altered_hsc_matrix(fm) * b2);
  out.rhs = quad / (n * (n + 1.0));
  out.rhs_doubled = 2.0 * out.rhs;
  out.abs_err = std::abs(out.lhs - out.rhs);
  const double var = std::max(0.0, sq / N - out.lhs * out.lhs) * N / (N - 1.0);
  out.std_error = std::sqrt(var / N);
  out.within_3_sigma = out.abs_err <= 3.0 * out.std_error + 1e-15;
  return out;
}

ChernCurvatureTensor antisymmetric_curvature_sample(int n, std::uint64_t seed, bool zero_diagonal) {
  if (n < 1) throw Error(ErrorKind::DimensionError, "tensor dimension");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ChernCurvatureTensor T(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) T(i, j, k, l) = Complex(gauss(rng), gauss(rng));
  // Conjugation symmetry first, then antisymmetry under the pair swap; the
  // second step keeps the first.
  ChernCurvatureTensor C(n), A(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) C(i, j, k, l) = 0.5 * (T(i, j, k, l) + std::conj(T(j, i, l, k)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) A(i, j, k, l) = 0.5 * (C(i, j, k, l) - C(k, l, i, j));
  for (int k = 0; k < n; ++k) A(k, k, k, k) = zero_diagonal ? 0.0 : gauss(rng);
  return A;
}

Theorem23Result theorem23_check(int n, int trials, std::uint64_t seed, double tol, bool zero_diagonal) {
  if (n < 2) throw Error(ErrorKind::DimensionError, "the comparison needs n >= 2");
  if (trials < 1) throw Error(ErrorKind::BadParams, "trials must be positive");
  Theorem23Result out;
  out.n = n;
  out.trials = trials;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const UnitaryFrame frame(ComplexMatrix::Identity(n, n));
  for (int t = 0; t < trials; ++t) {
    const ChernCurvatureTensor R = antisymmetric_curvature_sample(n, rng(), zero_diagonal);
    const FrameCurvatureMatrices fm = curvature_in_frame(R, frame);
    const RealMatrix PR = fm.P_mat + fm.R_mat;
    RealMatrix Sigma = RealMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) Sigma(k, k) = 2.0 * R(k, k, k, k).real();
    for (int s = 0; s < 100; ++s) {
      RealVector v(n);
      for (int i = 0; i < n; ++i) v(i) = unif(rng);
      v /= v.norm();
      const double q_pr = v.dot(PR * v);
      const double q_r = v.dot(fm.R_mat * v);
      const double q_sigma = v.dot(Sigma * v);
      out.literal_discrepancy = std::max(out.literal_discrepancy, std::abs(q_pr - q_r));
      out.sigma_discrepancy = std::max(out.sigma_discrepancy, std::abs(q_pr - q_sigma));
      out.multiple_discrepancy = std::max(out.multiple_discrepancy, std::abs(q_pr - 2.0 * q_r));
      out.rbc_discrepancy = std::max(out.rbc_discrepancy, std::abs(q_r - 0.5 * q_sigma));
    }
  }
  out.literal_holds = out.literal_discrepancy < tol;
  out.multiple_holds = out.multiple_discrepancy < tol && out.sigma_discrepancy < tol;
  return out;
}

}  // namespace chernlab
