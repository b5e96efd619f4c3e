#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chernlab/metric.hpp"
#include "chernlab/tensor.hpp"

namespace chernlab {

class HolomorphicMapModel {
 public:
  using Evaluator = std::function<ComplexVector(const ComplexVector&)>;

  HolomorphicMapModel() = default;
  HolomorphicMapModel(int source_dim, int target_dim, Evaluator f, std::string label,
                      Domain domain = Domain::unbounded(), Evaluator inverse = nullptr);

  int source_dim() const { return n_; }
  int target_dim() const { return m_; }
  const std::string& label() const { return label_; }
  const Domain& domain() const { return domain_; }
  bool has_inverse() const { return static_cast<bool>(inverse_); }

  ComplexVector operator()(const ComplexVector& z) const;
  ComplexVector inverse(const ComplexVector& w) const;

 private:
  int n_ = 0;
  int m_ = 0;
  Evaluator f_;
  Evaluator inverse_;
  std::string label_;
  Domain domain_;
};

// identity(n), scaling(n, c)  or scaling(n, re c, im c),
// linear(re a11, im a11, re a12, ...) row-major square,
// mobius(re a, im a) disk automorphism (z - a)/(1 - conj(a) z),
// power(k) z -> z^k on C.
HolomorphicMapModel catalog_map(const std::string& name, const std::vector<double>& params);
std::vector<std::string> catalog_map_names();

// Coordinatewise product of one-dimensional maps.
HolomorphicMapModel product_map(const std::vector<HolomorphicMapModel>& factors);

// Components "f[1] = expr" style (or one expression per entry of `components`).
HolomorphicMapModel expression_map(const std::vector<std::string>& components, int source_dim,
                                   Domain domain = Domain::unbounded());

inline constexpr double kJacobianStep = 1e-3;
inline constexpr double kCauchyRiemannTol = 1e-5;

struct JacobianResult {
  ComplexMatrix J;  // m x n, J(alpha, i) = d f^alpha / d z_i
  double cr_residual = 0.0;
};

// Throws NotHolomorphicAtPoint if the real- and imaginary-direction
// derivatives disagree by more than kCauchyRiemannTol (relative).
JacobianResult jacobian_with_residual(const HolomorphicMapModel& f, const ComplexVector& z,
                                      double h = kJacobianStep);
ComplexMatrix jacobian(const HolomorphicMapModel& f, const ComplexVector& z, double h = kJacobianStep);

// (f* eta)_{i jbar} = h_{alpha betabar}(f(z)) f_i^alpha conj(f_j^beta).
HermitianForm pullback_metric(const ComplexMatrix& J, const HermitianForm& h_at_fz);
HermitianForm pullback_metric(const HolomorphicMapModel& f, const ComplexVector& z,
                              const ChartedHermitianMetric& eta);

// |df|^2 = tr_omega(f* eta).
double energy_density(const ComplexMatrix& J, const HermitianForm& g, const HermitianForm& h);
double energy_density(const HolomorphicMapModel& f, const ComplexVector& z,
                      const ChartedHermitianMetric& omega, const ChartedHermitianMetric& eta);

struct SingularFrameData {
  RealVector lambdas;  // nonincreasing, length min(n, m)
  int rank = 0;
  UnitaryFrame source_frame;
  UnitaryFrame target_frame;
};

SingularFrameData singular_frames(const ComplexMatrix& J, const HermitianForm& g, const HermitianForm& h);
SingularFrameData singular_frames(const HolomorphicMapModel& f, const ComplexVector& z,
                                  const ChartedHermitianMetric& omega, const ChartedHermitianMetric& eta);

inline constexpr double kCriticalEnergy = 1e-10;

double laplacian_step(const ComplexVector& z);

// Delta_omega = g^{i jbar} d_i dbar_j applied to a scalar function, by
// nested fourth-order stencils.
double complex_laplacian(const std::function<double(const ComplexVector&)>& u,
                         const ChartedHermitianMetric& omega, const ComplexVector& z,
                         std::optional<double> step = std::nullopt);

// Delta_omega log |df|^2 at z. Throws NearCriticalPoint below kCriticalEnergy.
double laplacian_log_energy(const HolomorphicMapModel& f, const ComplexVector& z,
                            const ChartedHermitianMetric& omega, const ChartedHermitianMetric& eta);

// Delta_omega |df|^2 at z.
double laplacian_energy(const HolomorphicMapModel& f, const ComplexVector& z,
                        const ChartedHermitianMetric& omega, const ChartedHermitianMetric& eta);

// Solves f(z) = w by damped Newton from `guess`; uses the closed-form inverse
// when the model has one.
ComplexVector invert_map(const HolomorphicMapModel& f, const ComplexVector& w, const ComplexVector& guess);

// Delta_eta of w -> |df|^2(f^{-1}(w)) at w = f(z). Requires n = m and df
// invertible near z.
double target_laplacian_energy(const HolomorphicMapModel& f, const ComplexVector& z,
                               const ChartedHermitianMetric& omega, const ChartedHermitianMetric& eta);

}  // namespace chernlab
