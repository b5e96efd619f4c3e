#include "chernlab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chernlab/error.hpp"

namespace chernlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionError: return "DimensionError";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::UnknownCatalogName: return "UnknownCatalogName";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonHermitianExpression: return "NonHermitianExpression";
    case ErrorKind::EvaluationDomainError: return "EvaluationDomainError";
    case ErrorKind::DomainMarginError: return "DomainMarginError";
    case ErrorKind::NonFiniteSample: return "NonFiniteSample";
    case ErrorKind::FiniteDifferenceInconsistency: return "FiniteDifferenceInconsistency";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::ZeroSingularValue: return "ZeroSingularValue";
    case ErrorKind::NotHolomorphicAtPoint: return "NotHolomorphicAtPoint";
    case ErrorKind::NearCriticalPoint: return "NearCriticalPoint";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::InverseMapFailure: return "InverseMapFailure";
    case ErrorKind::InfeasibleHypothesis: return "InfeasibleHypothesis";
    case ErrorKind::UnboundedSbc: return "UnboundedSbc";
    case ErrorKind::HypothesisSignError: return "HypothesisSignError";
    case ErrorKind::FormInequalityViolated: return "FormInequalityViolated";
    case ErrorKind::BadIndices: return "BadIndices";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

void require_finite(const ComplexMatrix& m, const char* what) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::NonFiniteValue, std::string(what) + " has a non-finite entry");
    }
  }
}

HermitianForm::HermitianForm(const ComplexMatrix& raw) {
  if (raw.rows() != raw.cols() || raw.rows() == 0) {
    throw Error(ErrorKind::DimensionError, "Hermitian form needs a non-empty square matrix");
  }
  require_finite(raw, "Hermitian form");
  const ComplexMatrix adj = raw.adjoint();
  m_ = (raw + adj) * 0.5;
  residue_ = ((raw - adj) * 0.5).cwiseAbs().maxCoeff();
}

HermitianForm HermitianForm::identity(int n) {
  return HermitianForm(ComplexMatrix::Identity(n, n));
}

bool HermitianForm::is_positive_definite() const {
  Eigen::LLT<ComplexMatrix> llt(m_);
  return llt.info() == Eigen::Success && eigenvalues().minCoeff() > 0.0;
}

RealVector HermitianForm::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double HermitianForm::evaluate(const ComplexVector& v) const {
  return (v.transpose() * m_ * v.conjugate())(0, 0).real();
}

HermitianForm HermitianForm::operator+(const HermitianForm& o) const {
  if (o.dim() != dim()) throw Error(ErrorKind::DimensionMismatch, "form sum");
  return HermitianForm(ComplexMatrix(m_ + o.m_));
}

HermitianForm HermitianForm::operator-(const HermitianForm& o) const {
  if (o.dim() != dim()) throw Error(ErrorKind::DimensionMismatch, "form difference");
  return HermitianForm(ComplexMatrix(m_ - o.m_));
}

HermitianForm HermitianForm::operator*(double s) const {
  return HermitianForm(ComplexMatrix(m_ * s));
}

HermitianForm operator*(double s, const HermitianForm& f) { return f * s; }

ChernCurvatureTensor::ChernCurvatureTensor(int n)
    : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, Complex(0.0, 0.0)) {
  if (n <= 0) throw Error(ErrorKind::DimensionError, "tensor dimension must be positive");
}

double ChernCurvatureTensor::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ChernCurvatureTensor::conjugation_residue() const {
  double r = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l)
          r = std::max(r, std::abs((*this)(i, j, k, l) - std::conj((*this)(j, i, l, k))));
  return r / std::max(1.0, max_abs());
}

ChernCurvatureTensor ChernCurvatureTensor::operator-(const ChernCurvatureTensor& o) const {
  if (o.n_ != n_) throw Error(ErrorKind::DimensionMismatch, "tensor difference");
  ChernCurvatureTensor out(n_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - o.data_[i];
  return out;
}

double UnitaryFrame::unitarity_residue(const HermitianForm& g) const {
  const ComplexMatrix gram = e_.transpose() * g.matrix() * e_.conjugate();
  const ComplexMatrix id = ComplexMatrix::Identity(gram.rows(), gram.cols());
  return (gram - id).cwiseAbs().maxCoeff();
}

HermitianForm hermitian_inverse(const HermitianForm& g) {
  Eigen::LLT<ComplexMatrix> llt(g.matrix());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "Cholesky factorization failed");
  }
  const int n = g.dim();
  return HermitianForm(ComplexMatrix(llt.solve(ComplexMatrix::Identity(n, n))));
}

UnitaryFrame gram_unitary_frame(const HermitianForm& g) {
  // conj(g) = L L^dagger with L lower triangular; e = L^{-dagger} gives
  // e^dagger conj(g) e = I, equivalently e^T g conj(e) = I.
  const ComplexMatrix gbar = g.matrix().conjugate();
  Eigen::LLT<ComplexMatrix> llt(gbar);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "Cholesky factorization failed");
  }
  const int n = g.dim();
  const ComplexMatrix L = llt.matrixL();
  ComplexMatrix Ladj = L.adjoint();
  ComplexMatrix e = Ladj.triangularView<Eigen::Upper>().solve(ComplexMatrix::Identity(n, n));
  return UnitaryFrame(std::move(e));
}

ChernCurvatureTensor tensor_in_frame(const ChernCurvatureTensor& R, const UnitaryFrame& frame) {
  const int n = R.dim();
  if (frame.dim() != n || frame.matrix().rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "frame and tensor dimensions differ");
  }
  const ComplexMatrix& e = frame.matrix();
  // Contract one slot at a time; slots 1 and 3 take e, slots 2 and 4 conj(e).
  ChernCurvatureTensor a(n), b(n);
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex s = 0.0;
          for (int i = 0; i < n; ++i) s += R(i, j, k, l) * e(i, p);
          a(p, j, k, l) = s;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex s = 0.0;
          for (int j = 0; j < n; ++j) s += a(p, j, k, l) * std::conj(e(j, q));
          b(p, q, k, l) = s;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int l = 0; l < n; ++l) {
          Complex s = 0.0;
          for (int k = 0; k < n; ++k) s += b(p, q, k, l) * e(k, r);
          a(p, q, r, l) = s;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s_ = 0; s_ < n; ++s_) {
          Complex s = 0.0;
          for (int l = 0; l < n; ++l) s += a(p, q, r, l) * std::conj(e(l, s_));
          b(p, q, r, s_) = s;
        }
  return b;
}

FrameCurvatureMatrices curvature_in_frame(const ChernCurvatureTensor& R, const UnitaryFrame& e) {
  const ChernCurvatureTensor F = tensor_in_frame(R, e);
  const int n = R.dim();
  FrameCurvatureMatrices out;
  out.R_mat = RealMatrix::Zero(n, n);
  out.P_mat = RealMatrix::Zero(n, n);
  double imag = 0.0;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      const Complex r = F(a, a, c, c);
      const Complex p = F(a, c, c, a);
      out.R_mat(a, c) = r.real();
      out.P_mat(a, c) = p.real();
      imag = std::max({imag, std::abs(r.imag()), std::abs(p.imag())});
    }
  out.imaginary_residue = imag;
  return out;
}

RealVector relative_eigenvalues(const HermitianForm& A, const HermitianForm& g) {
  if (A.dim() != g.dim()) throw Error(ErrorKind::DimensionMismatch, "relative eigenvalues");
  const ComplexMatrix e = gram_unitary_frame(g).matrix();
  const ComplexMatrix B = e.transpose() * A.matrix() * e.conjugate();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ComplexMatrix((B + B.adjoint()) * 0.5),
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double trace_with(const HermitianForm& A, const HermitianForm& g) {
  if (A.dim() != g.dim()) throw Error(ErrorKind::DimensionMismatch, "trace");
  return (hermitian_inverse(g).matrix() * A.matrix()).trace().real();
}

ComplexMatrix unitary_exp(const ComplexMatrix& skew) {
  // X = i H with H Hermitian, exp(X) = V exp(i D) V^dagger.
  const Complex I(0.0, 1.0);
  const ComplexMatrix H = -I * skew;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ComplexMatrix((H + H.adjoint()) * 0.5));
  const RealVector d = es.eigenvalues();
  ComplexVector phase(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) phase(i) = std::exp(I * d(i));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace chernlab
