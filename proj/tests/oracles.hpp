#pragma once

// Hand-derived curvature of the catalog metrics, written out from the
// defining formulas so the tests do not lean on the library's contractions.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "chernlab/metric.hpp"
#include "chernlab/tensor.hpp"

namespace oracle {

using chernlab::ChernCurvatureTensor;
using chernlab::Complex;
using chernlab::ComplexMatrix;
using chernlab::ComplexVector;

inline ComplexMatrix fs_metric(const ComplexVector& z) {
  const int n = static_cast<int>(z.size());
  const double s = 1.0 + z.squaredNorm();
  ComplexMatrix g(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) g(k, l) = (k == l ? 1.0 : 0.0) / s - std::conj(z(k)) * z(l) / (s * s);
  return g;
}

inline ComplexMatrix hyperbolic_metric(const ComplexVector& z) {
  const int n = static_cast<int>(z.size());
  const double s = 1.0 - z.squaredNorm();
  ComplexMatrix g(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) g(k, l) = (k == l ? 1.0 : 0.0) / s + std::conj(z(k)) * z(l) / (s * s);
  return g;
}

// Constant holomorphic sectional curvature 2c: R = c (g_ij g_kl + g_il g_kj).
inline ChernCurvatureTensor space_form(const ComplexMatrix& g, double c) {
  const int n = static_cast<int>(g.rows());
  ChernCurvatureTensor R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) R(i, j, k, l) = c * (g(i, j) * g(k, l) + g(i, l) * g(k, j));
  return R;
}

inline ChernCurvatureTensor fs_curvature(const ComplexVector& z) { return space_form(fs_metric(z), 1.0); }
inline ChernCurvatureTensor hyperbolic_curvature(const ComplexVector& z) {
  return space_form(hyperbolic_metric(z), -1.0);
}

// Line metric a / (1 - |z|^2)^2: R = -g dd^c log g = -2 g^2 / a.
inline ChernCurvatureTensor poincare_curvature(const ComplexVector& z, double a) {
  const double s = 1.0 - std::norm(z(0));
  const double g = a / (s * s);
  ChernCurvatureTensor R(1);
  R(0, 0, 0, 0) = -2.0 * g * g / a;
  return R;
}

inline ChernCurvatureTensor polydisk_curvature(const ComplexVector& z, const std::vector<double>& a) {
  const int n = static_cast<int>(z.size());
  ChernCurvatureTensor R(n);
  for (int i = 0; i < n; ++i) {
    const double s = 1.0 - std::norm(z(i));
    const double g = a[i] / (s * s);
    R(i, i, i, i) = -2.0 * g * g / a[i];
  }
  return R;
}

inline ChernCurvatureTensor euclidean_curvature(int n) { return ChernCurvatureTensor(n); }

// g = I / |z|^2: R_{i jbar k lbar} = delta_kl (delta_ij / r^4 - conj(z_i) z_j / r^6).
inline ChernCurvatureTensor hopf_curvature(const ComplexVector& z) {
  const int n = static_cast<int>(z.size());
  const double r2 = z.squaredNorm();
  ChernCurvatureTensor R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        R(i, j, k, k) = (i == j ? 1.0 : 0.0) / (r2 * r2) - std::conj(z(i)) * z(j) / (r2 * r2 * r2);
      }
  return R;
}

// Hopf Ricci traces, contracted by hand with g^{-1} = r^2 I.
//   first:  g^{k lbar} R_{i jbar k lbar} = n (delta_ij / r^2 - conj(z_i) z_j / r^4)
//   second: g^{i jbar} R_{i jbar k lbar} = delta_kl (n - 1) / r^2
//   third:  g^{i lbar} R_{i jbar k lbar} = delta_kj / r^2 - conj(z_k) z_j / r^4
inline ComplexMatrix hopf_ricci(const ComplexVector& z, int kind) {
  const int n = static_cast<int>(z.size());
  const double r2 = z.squaredNorm();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Complex flat = (a == b ? 1.0 : 0.0) / r2 - std::conj(z(a)) * z(b) / (r2 * r2);
      if (kind == 1) out(a, b) = static_cast<double>(n) * flat;
      if (kind == 2) out(a, b) = a == b ? (n - 1.0) / r2 : 0.0;
      if (kind == 3) out(a, b) = flat;
    }
  return out;
}

inline double max_abs_diff(const ChernCurvatureTensor& A, const ChernCurvatureTensor& B) {
  const int n = A.dim();
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) m = std::max(m, std::abs(A(i, j, k, l) - B(i, j, k, l)));
  return m;
}

inline double relative_error(const ChernCurvatureTensor& got, const ChernCurvatureTensor& want) {
  return max_abs_diff(got, want) / std::max(1.0, want.max_abs());
}

// Seeded generators for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  ComplexVector gaussian_vector(int n) {
    ComplexVector v(n);
    for (int i = 0; i < n; ++i) v(i) = Complex(normal(), normal());
    return v;
  }

  // Uniform direction, radius uniform in [r_lo, r_hi].
  ComplexVector in_shell(int n, double r_lo, double r_hi) {
    ComplexVector v = gaussian_vector(n);
    return v / v.norm() * uniform(r_lo, r_hi);
  }

  // Each coordinate with modulus below r.
  ComplexVector in_polydisk(int n, double r) {
    ComplexVector v(n);
    for (int i = 0; i < n; ++i) v(i) = std::polar(uniform(0.0, r), uniform(0.0, 2.0 * M_PI));
    return v;
  }

  chernlab::RealVector nonneg_unit(int n) {
    chernlab::RealVector v(n);
    for (int i = 0; i < n; ++i) v(i) = std::abs(normal());
    return v / v.norm();
  }

  chernlab::RealMatrix symmetric(int n, double scale = 1.0) {
    chernlab::RealMatrix A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = scale * normal();
    return 0.5 * (A + A.transpose());
  }

  ComplexMatrix unitary(int n) {
    ComplexMatrix X(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) X(i, j) = Complex(normal(), normal());
    return Eigen::HouseholderQR<ComplexMatrix>(X).householderQ();
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
