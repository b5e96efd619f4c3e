#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace chernlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Index convention used throughout: a Hermitian form is stored as the matrix
// A(i, j) = A_{i jbar}, and evaluates on tangent vectors as
//   A(v, w) = sum_{ij} A_{i jbar} v_i conj(w_j) = v^T A conj(w).
// The inverse metric g^{i jbar} is therefore the transpose of the matrix
// inverse, and tr_g(A) = trace(g^{-1} A).

void require_finite(const ComplexMatrix& m, const char* what);

class HermitianForm {
 public:
  HermitianForm() = default;
  // Symmetrizes (A + A^dagger) / 2 and keeps the size of the discarded
  // anti-Hermitian part.
  explicit HermitianForm(const ComplexMatrix& raw);

  static HermitianForm identity(int n);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  // max |A_ij - conj(A_ji)| / 2 of the input before symmetrization.
  double residue() const { return residue_; }

  bool is_positive_definite() const;
  RealVector eigenvalues() const;

  // A(v, v) = v^T A conj(v).
  double evaluate(const ComplexVector& v) const;

  HermitianForm operator+(const HermitianForm& o) const;
  HermitianForm operator-(const HermitianForm& o) const;
  HermitianForm operator*(double s) const;

 private:
  ComplexMatrix m_;
  double residue_ = 0.0;
};

HermitianForm operator*(double s, const HermitianForm& f);

// n^4 complex array R[i][j][k][l] = R_{i jbar k lbar}.
class ChernCurvatureTensor {
 public:
  ChernCurvatureTensor() = default;
  explicit ChernCurvatureTensor(int n);

  int dim() const { return n_; }
  Complex& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  Complex operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }

  // max |R_{ijkl} - conj(R_{jilk})| / max(1, max |R|).
  double conjugation_residue() const;
  double max_abs() const;

  ChernCurvatureTensor operator-(const ChernCurvatureTensor& o) const;

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }

  int n_ = 0;
  std::vector<Complex> data_;
};

// Columns of `matrix()` are the frame vectors e_alpha; unitary means
// g(e_alpha, e_beta) = delta, i.e. e^T g conj(e) = I.
class UnitaryFrame {
 public:
  UnitaryFrame() = default;
  explicit UnitaryFrame(ComplexMatrix e) : e_(std::move(e)) {}

  int dim() const { return static_cast<int>(e_.cols()); }
  const ComplexMatrix& matrix() const { return e_; }

  // max-norm of e^T g conj(e) - I.
  double unitarity_residue(const HermitianForm& g) const;

  // The frame e * u, for u unitary in the ordinary sense.
  UnitaryFrame rotated(const ComplexMatrix& u) const { return UnitaryFrame(e_ * u); }

 private:
  ComplexMatrix e_;
};

struct FrameCurvatureMatrices {
  RealMatrix R_mat;  // R_mat(a, c) = Re R_{a abar c cbar}
  RealMatrix P_mat;  // P_mat(a, c) = Re R_{a cbar c abar}
  double imaginary_residue = 0.0;

  int dim() const { return static_cast<int>(R_mat.rows()); }
};

HermitianForm hermitian_inverse(const HermitianForm& g);
UnitaryFrame gram_unitary_frame(const HermitianForm& g);

// Full tensor expressed in the frame: R_{a bbar c dbar}.
ChernCurvatureTensor tensor_in_frame(const ChernCurvatureTensor& R, const UnitaryFrame& e);
FrameCurvatureMatrices curvature_in_frame(const ChernCurvatureTensor& R, const UnitaryFrame& e);

// Eigenvalues of the form A measured in a unitary frame of g (the numbers c
// such that A - c g is degenerate). Ascending.
RealVector relative_eigenvalues(const HermitianForm& A, const HermitianForm& g);

// tr_g(A) = g^{i jbar} A_{i jbar}.
double trace_with(const HermitianForm& A, const HermitianForm& g);

// U = exp(X) for skew-Hermitian X.
ComplexMatrix unitary_exp(const ComplexMatrix& skew);

}  // namespace chernlab
