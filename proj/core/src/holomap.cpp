#include "chernlab/holomap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chernlab/error.hpp"
#include "chernlab/expression.hpp"
#include "chernlab/fd.hpp"

namespace chernlab {

HolomorphicMapModel::HolomorphicMapModel(int source_dim, int target_dim, Evaluator f, std::string label,
                                         Domain domain, Evaluator inverse)
    : n_(source_dim),
      m_(target_dim),
      f_(std::move(f)),
      inverse_(std::move(inverse)),
      label_(std::move(label)),
      domain_(std::move(domain)) {
  if (n_ < 1 || m_ < 1) throw Error(ErrorKind::DimensionError, "map dimensions must be positive");
}

ComplexVector HolomorphicMapModel::operator()(const ComplexVector& z) const {
  if (z.size() != n_) throw Error(ErrorKind::DimensionMismatch, "map '" + label_ + "' applied to a wrong-size point");
  ComplexVector w = f_(z);
  if (w.size() != m_) throw Error(ErrorKind::DimensionMismatch, "map '" + label_ + "' returned a wrong-size value");
  if (!w.allFinite()) throw Error(ErrorKind::NonFiniteSample, "map '" + label_ + "' is not finite at the point");
  return w;
}

ComplexVector HolomorphicMapModel::inverse(const ComplexVector& w) const {
  if (!inverse_) throw Error(ErrorKind::InverseMapFailure, "map '" + label_ + "' has no closed-form inverse");
  ComplexVector z = inverse_(w);
  if (!z.allFinite()) throw Error(ErrorKind::InverseMapFailure, "inverse of '" + label_ + "' is not finite");
  return z;
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

int whole(double x, const char* what) {
  if (!(x >= 1.0) || x != std::floor(x) || x > 64) {
    throw Error(ErrorKind::BadParams, std::string(what) + " must be a positive integer");
  }
  return static_cast<int>(x);
}

HolomorphicMapModel linear_map(const ComplexMatrix& A, std::string label) {
  const int n = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  HolomorphicMapModel::Evaluator inv = nullptr;
  if (n == m) {
    Eigen::FullPivLU<ComplexMatrix> lu(A);
    if (lu.isInvertible()) {
      const ComplexMatrix Ainv = lu.inverse();
      inv = [Ainv](const ComplexVector& w) -> ComplexVector { return Ainv * w; };
    }
  }
  return HolomorphicMapModel(
      n, m, [A](const ComplexVector& z) -> ComplexVector { return A * z; }, std::move(label),
      Domain::unbounded(), inv);
}

}  // namespace

std::vector<std::string> catalog_map_names() { return {"identity", "scaling", "linear", "mobius", "power"}; }

HolomorphicMapModel catalog_map(const std::string& name, const std::vector<double>& params) {
  for (double p : params)
    if (!std::isfinite(p)) throw Error(ErrorKind::BadParams, "map parameters must be finite");

  if (name == "identity") {
    const int n = params.empty() ? 1 : whole(params[0], "identity dimension");
    if (params.size() > 1) throw Error(ErrorKind::BadParams, "identity takes one parameter (n)");
    return linear_map(ComplexMatrix::Identity(n, n), "identity");
  }
  if (name == "scaling") {
    if (params.size() < 2 || params.size() > 3) {
      throw Error(ErrorKind::BadParams, "scaling takes (n, c) or (n, re c, im c)");
    }
    const int n = whole(params[0], "scaling dimension");
    const Complex c(params[1], params.size() == 3 ? params[2] : 0.0);
    return linear_map(c * ComplexMatrix::Identity(n, n), "scaling");
  }
  if (name == "linear") {
    const std::size_t cnt = params.size() / 2;
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cnt))));
    if (params.size() % 2 != 0 || n < 1 || static_cast<std::size_t>(n * n) != cnt) {
      throw Error(ErrorKind::BadParams, "linear takes 2 n^2 reals (re, im pairs, row-major)");
    }
    ComplexMatrix A(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const std::size_t k = 2 * (static_cast<std::size_t>(r) * n + c);
        A(r, c) = Complex(params[k], params[k + 1]);
      }
    return linear_map(A, "linear");
  }
  if (name == "mobius") {
    if (params.size() != 2) throw Error(ErrorKind::BadParams, "mobius takes (re a, im a)");
    const Complex a(params[0], params[1]);
    if (!(std::abs(a) < 1.0)) throw Error(ErrorKind::BadParams, "mobius needs |a| < 1");
    auto phi = [](Complex b) {
      return [b](const ComplexVector& z) -> ComplexVector {
        ComplexVector w(1);
        w(0) = (z(0) - b) / (1.0 - std::conj(b) * z(0));
        return w;
      };
    };
    return HolomorphicMapModel(1, 1, phi(a), "mobius", Domain::ball(1.0), phi(-a));
  }
  if (name == "power") {
    if (params.size() != 1) throw Error(ErrorKind::BadParams, "power takes (k)");
    const int k = whole(params[0], "power exponent");
    return HolomorphicMapModel(1, 1,
                               [k](const ComplexVector& z) -> ComplexVector {
                                 ComplexVector w(1);
                                 w(0) = std::pow(z(0), k);
                                 return w;
                               },
                               "power");
  }
  throw Error(ErrorKind::UnknownCatalogName, "no catalog map named '" + name + "'");
}

HolomorphicMapModel product_map(const std::vector<HolomorphicMapModel>& factors) {
  if (factors.empty()) throw Error(ErrorKind::BadParams, "product of no maps");
  int n = 0, m = 0;
  bool invertible = true;
  std::string label = "product(";
  for (std::size_t k = 0; k < factors.size(); ++k) {
    n += factors[k].source_dim();
    m += factors[k].target_dim();
    invertible = invertible && factors[k].has_inverse();
    label += (k ? "," : "") + factors[k].label();
  }
  label += ")";
  auto apply = [factors](const ComplexVector& z, bool inv) {
    std::vector<ComplexVector> parts;
    Eigen::Index pos = 0, total = 0;
    for (const auto& f : factors) {
      const int d = inv ? f.target_dim() : f.source_dim();
      const ComplexVector piece = z.segment(pos, d);
      parts.push_back(inv ? f.inverse(piece) : f(piece));
      pos += d;
      total += parts.back().size();
    }
    ComplexVector out(total);
    pos = 0;
    for (const auto& p : parts) {
      out.segment(pos, p.size()) = p;
      pos += p.size();
    }
    return out;
  };
  HolomorphicMapModel::Evaluator inv = nullptr;
  if (invertible) inv = [apply](const ComplexVector& w) { return apply(w, true); };
  return HolomorphicMapModel(n, m, [apply](const ComplexVector& z) { return apply(z, false); }, label,
                             Domain::unbounded(), inv);
}

HolomorphicMapModel expression_map(const std::vector<std::string>& components, int source_dim,
                                   Domain domain) {
  if (components.empty()) throw Error(ErrorKind::BadParams, "expression map needs components");
  if (source_dim < 1) throw Error(ErrorKind::DimensionError, "expression map source dimension");
  std::vector<Expression> exprs;
  for (std::size_t k = 0; k < components.size(); ++k) {
    exprs.push_back(parse_expression(components[k], static_cast<int>(k)));
    if (exprs.back().max_variable() > source_dim) {
      throw Error(ErrorKind::ParseError, "component " + std::to_string(k + 1) + " uses z" +
                                             std::to_string(exprs.back().max_variable()) +
                                             " beyond the source dimension");
    }
  }
  HolomorphicMapModel f(
      source_dim, static_cast<int>(exprs.size()),
      [exprs](const ComplexVector& z) -> ComplexVector {
        ComplexVector w(static_cast<Eigen::Index>(exprs.size()));
        for (std::size_t k = 0; k < exprs.size(); ++k) w(static_cast<Eigen::Index>(k)) = exprs[k].evaluate(z);
        return w;
      },
      "custom", domain);

  // Reject maps that are visibly not holomorphic before anything else uses them.
  const ComplexVector c = domain.center_point(source_dim);
  const double rho = 0.5 * domain.probe_radius();
  std::vector<ComplexVector> probes{c};
  for (int a = 0; a < 2 * source_dim; ++a) probes.push_back(fd::shifted(c, a, rho));
  for (const auto& p : probes) {
    if (domain.margin(p) < fd::kOffsets.back() * kJacobianStep * 2) continue;
    try {
      (void)jacobian_with_residual(f, p);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotHolomorphicAtPoint) throw;
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Jacobian and pointwise quantities

JacobianResult jacobian_with_residual(const HolomorphicMapModel& f, const ComplexVector& z, double h) {
  const int n = f.source_dim();
  if (z.size() != n) throw Error(ErrorKind::DimensionMismatch, "jacobian point size");
  const double reach = fd::kOffsets.back() * h;
  if (f.domain().margin(z) < reach) {
    throw Error(ErrorKind::DomainMarginError, "point is within the stencil reach of the map domain boundary");
  }
  JacobianResult out;
  out.J.resize(f.target_dim(), n);
  double resid = 0.0;
  for (int i = 0; i < n; ++i) {
    // Holomorphy: df/dz_i = df/dx_i = -i df/dy_i.
    const ComplexVector dx = fd::first(f, z, 2 * i, h);
    const ComplexVector dy = fd::first(f, z, 2 * i + 1, h) * Complex(0.0, -1.0);
    out.J.col(i) = 0.5 * (dx + dy);
    resid = std::max(resid, (dx - dy).cwiseAbs().maxCoeff());
  }
  out.cr_residual = resid / std::max(1.0, out.J.cwiseAbs().maxCoeff());
  if (!(out.cr_residual <= kCauchyRiemannTol)) {
    std::ostringstream os;
    os << "map '" << f.label() << "' fails the Cauchy-Riemann check (residual " << out.cr_residual << ")";
    throw Error(ErrorKind::NotHolomorphicAtPoint, os.str());
  }
  return out;
}

ComplexMatrix jacobian(const HolomorphicMapModel& f, const ComplexVector& z, double h) {
  return jacobian_with_residual(f, z, h).J;
}

HermitianForm pullback_metric(const ComplexMatrix& J, const HermitianForm& h_at_fz) {
  if (J.rows() != h_at_fz.dim()) throw Error(ErrorKind::DimensionMismatch, "pullback: target dimension");
  return HermitianForm(ComplexMatrix(J.transpose() * h_at_fz.matrix() * J.conjugate()));
}

HermitianForm pullback_metric(const HolomorphicMapModel& f, const ComplexVector& z,
                              const ChartedHermitianMetric& eta) {
  return pullback_metric(jacobian(f, z), eta(f(z)));
}

double energy_density(const ComplexMatrix& J, const HermitianForm& g, const HermitianForm& h) {
  if (J.cols() != g.dim()) throw Error(ErrorKind::DimensionMismatch, "energy: source dimension");
  return trace_with(pullback_metric(J, h), g);
}

double energy_density(const HolomorphicMapModel& f, const ComplexVector& z,
                      const ChartedHermitianMetric& omega, const ChartedHermitianMetric& eta) {
  return energy_density(jacobian(f, z), omega(z), eta(f(z)));
}

SingularFrameData singular_frames(const ComplexMatrix& J, const HermitianForm& g, const HermitianForm& h) {
  if (J.cols() != g.dim() || J.rows() != h.dim()) throw Error(ErrorKind::DimensionMismatch, "singular frames");
  const UnitaryFrame eg = gram_unitary_frame(g);
  const UnitaryFrame eh = gram_unitary_frame(h);
  // In unitary coordinates df is A = eh^{-1} J eg; its ordinary SVD A = V L U^dagger
  // gives frames eg U and eh V with df (eg U) = (eh V) L.
  const ComplexMatrix A = eh.matrix().partialPivLu().solve(J * eg.matrix());
  Eigen::JacobiSVD<ComplexMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SingularFrameData out;
  out.lambdas = svd.singularValues();
  const double top = out.lambdas.size() ? out.lambdas(0) : 0.0;
  for (int i = 0; i < out.lambdas.size(); ++i)
    if (out.lambdas(i) > 1e-9 * std::max(1.0, top)) ++out.rank;
  out.source_frame = eg.rotated(svd.matrixV());
  out.target_frame = eh.rotated(svd.matrixU());
  return out;
}

SingularFrameData singular_frames(const HolomorphicMapModel& f, const ComplexVector& z,
                                  const ChartedHermitianMetric& omega, const ChartedHermitianMetric& eta) {
  return singular_frames(jacobian(f, z), omega(z), eta(f(z)));
}

// ---------------------------------------------------------------------------
// Laplacians

double laplacian_step(const ComplexVector& z) { return 2e-3 * std::max(1.0, z.norm()); }

double complex_laplacian(const std::function<double(const ComplexVector&)>& u,
                         const ChartedHermitianMetric& omega, const ComplexVector& z,
                         std::optional<double> step) {
  const int n = omega.dim();
  if (z.size() != n) throw Error(ErrorKind::DimensionMismatch, "laplacian point size");
  const double h = step.value_or(laplacian_step(z));
  if (omega.domain().margin(z) < fd::kNestedReach * h) {
    throw Error(ErrorKind::DomainMarginError, "point is within the Laplacian stencil reach of the boundary");
  }
  auto uc = [&u](const ComplexVector& w) -> Complex {
    const double v = u(w);
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteSample, "Laplacian integrand is not finite");
    return Complex(v, 0.0);
  };
  const std::vector<Complex> d2 = fd::all_second(uc, z, h);
  const ComplexMatrix ginv = hermitian_inverse(omega(z)).matrix();
  Complex s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += ginv(j, i) * fd::wirtinger_ddbar(d2, n, i, j);
  return s.real();
}

double laplacian_log_energy(const HolomorphicMapModel& f, const ComplexVector& z,
                            const ChartedHermitianMetric& omega, const ChartedHermitianMetric& eta) {
  const double e0 = energy_density(f, z, omega, eta);
  if (!(e0 > kCriticalEnergy)) {
    throw Error(ErrorKind::NearCriticalPoint, "energy density vanishes at the point");
  }
  return complex_laplacian(
      [&](const ComplexVector& w) { return std::log(energy_density(f, w, omega, eta)); }, omega, z);
}

double laplacian_energy(const HolomorphicMapModel& f, const ComplexVector& z,
                        const ChartedHermitianMetric& omega, const ChartedHermitianMetric& eta) {
  return complex_laplacian([&](const ComplexVector& w) { return energy_density(f, w, omega, eta); }, omega, z);
}

ComplexVector invert_map(const HolomorphicMapModel& f, const ComplexVector& w, const ComplexVector& guess) {
  if (f.source_dim() != f.target_dim()) throw Error(ErrorKind::InverseMapFailure, "map is not equidimensional");
  if (f.has_inverse()) return f.inverse(w);
  ComplexVector z = guess;
  const double scale = std::max(1.0, w.norm());
  ComplexVector r = f(z) - w;
  for (int it = 0; it < 60; ++it) {
    if (r.norm() < 1e-14 * scale) return z;
    Eigen::FullPivLU<ComplexMatrix> lu(jacobian(f, z));
    if (!lu.isInvertible()) throw Error(ErrorKind::InverseMapFailure, "singular Jacobian during inversion");
    const ComplexVector dz = lu.solve(r);
    double t = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt, t *= 0.5) {
      const ComplexVector zt = z - t * dz;
      if (!f.domain().contains(zt)) continue;
      const ComplexVector rt = f(zt) - w;
      if (rt.norm() < r.norm()) {
        z = zt;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (r.norm() < 1e-10 * scale) return z;
  throw Error(ErrorKind::InverseMapFailure, "Newton iteration did not converge");
}

double target_laplacian_energy(const HolomorphicMapModel& f, const ComplexVector& z,
                               const ChartedHermitianMetric& omega, const ChartedHermitianMetric& eta) {
  if (f.source_dim() != f.target_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "target Laplacian needs an equidimensional map");
  }
  const ComplexVector w0 = f(z);
  // The stencil is small, so z is a good Newton start for every stencil point.
  auto u = [&](const ComplexVector& w) {
    const ComplexVector zw = invert_map(f, w, z);
    return energy_density(f, zw, omega, eta);
  };
  return complex_laplacian(u, eta, w0);
}

}  // namespace chernlab
