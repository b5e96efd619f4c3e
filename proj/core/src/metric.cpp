#include "chernlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chernlab/error.hpp"
#include "chernlab/fd.hpp"

namespace chernlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

int dimension_param(const std::vector<double>& params, const std::string& name) {
  if (params.empty()) throw Error(ErrorKind::BadParams, name + " needs a dimension parameter");
  const double n = params[0];
  if (n < 1.0 || n != std::floor(n) || n > 16.0) {
    throw Error(ErrorKind::BadParams, name + ": dimension must be an integer in [1, 16]");
  }
  return static_cast<int>(n);
}

std::string format_label(const std::string& name, const std::vector<double>& params) {
  std::ostringstream os;
  os << name << '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) os << ',';
    os << params[i];
  }
  os << ')';
  return os.str();
}

double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double max_diff(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, max_abs(a[i] - b[i]));
  return d;
}

struct RawDerivatives {
  std::vector<ComplexMatrix> d1;  // real first derivatives
  std::vector<ComplexMatrix> d2;  // real second derivatives
};

RawDerivatives raw_derivatives(const ChartedHermitianMetric& m, const ComplexVector& z, double h) {
  auto eval = [&m](const ComplexVector& w) -> ComplexMatrix {
    ComplexMatrix g = m.raw(w);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const Complex v = g.data()[i];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw Error(ErrorKind::NonFiniteSample, "metric '" + m.label() + "' is not finite at a stencil point");
      }
    }
    return g;
  };
  return {fd::all_first(eval, z, h), fd::all_second(eval, z, h)};
}

}  // namespace

Domain Domain::unbounded() { return Domain{}; }

Domain Domain::ball(double radius, ComplexVector center) {
  Domain d;
  d.kind = Kind::Ball;
  d.radius = radius;
  d.center = std::move(center);
  return d;
}

Domain Domain::box(double half_width, ComplexVector center) {
  Domain d;
  d.kind = Kind::Box;
  d.radius = half_width;
  d.center = std::move(center);
  return d;
}

Domain Domain::polydisk(double radius) {
  Domain d;
  d.kind = Kind::Polydisk;
  d.radius = radius;
  return d;
}

Domain Domain::annulus(double inner, double outer) {
  Domain d;
  d.kind = Kind::Annulus;
  d.inner_radius = inner;
  d.radius = outer;
  return d;
}

ComplexVector Domain::center_point(int n) const {
  if (center.size() == n) return center;
  if (kind == Kind::Annulus) {
    ComplexVector c = ComplexVector::Zero(n);
    c(0) = 0.5 * (inner_radius + radius);
    return c;
  }
  return ComplexVector::Zero(n);
}

double Domain::probe_radius() const {
  switch (kind) {
    case Kind::Unbounded: return 1.0;
    case Kind::Annulus: return 0.5 * (radius - inner_radius);
    default: return radius;
  }
}

double Domain::margin(const ComplexVector& z) const {
  const ComplexVector c = center.size() == z.size() ? center : ComplexVector::Zero(z.size());
  const ComplexVector w = z - c;
  switch (kind) {
    case Kind::Unbounded:
      return std::numeric_limits<double>::infinity();
    case Kind::Ball:
      return radius - w.norm();
    case Kind::Box: {
      double m = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        m = std::min({m, radius - std::abs(w(i).real()), radius - std::abs(w(i).imag())});
      }
      return m;
    }
    case Kind::Polydisk: {
      double m = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < w.size(); ++i) m = std::min(m, radius - std::abs(w(i)));
      return m;
    }
    case Kind::Annulus: {
      const double r = w.norm();
      return std::min(r - inner_radius, radius - r);
    }
  }
  return 0.0;
}

ChartedHermitianMetric::ChartedHermitianMetric(int n, Domain domain, Evaluator evaluator,
                                               std::string label, KahlerFlag kahler)
    : n_(n), domain_(std::move(domain)), eval_(std::move(evaluator)), label_(std::move(label)),
      kahler_(kahler) {
  if (n <= 0) throw Error(ErrorKind::DimensionError, "metric dimension must be positive");
}

ComplexMatrix ChartedHermitianMetric::raw(const ComplexVector& z) const {
  if (z.size() != n_) throw Error(ErrorKind::DimensionMismatch, "point dimension differs from metric '" + label_ + "'");
  ComplexMatrix g = eval_(z);
  if (g.rows() != n_ || g.cols() != n_) {
    throw Error(ErrorKind::DimensionMismatch, "evaluator of '" + label_ + "' returned a wrong-sized matrix");
  }
  return g;
}

HermitianForm ChartedHermitianMetric::operator()(const ComplexVector& z) const {
  return HermitianForm(raw(z));
}

ChartedHermitianMetric ChartedHermitianMetric::scaled(double c) const {
  if (!(c > 0.0)) throw Error(ErrorKind::BadParams, "metric scale must be positive");
  Evaluator base = eval_;
  std::ostringstream os;
  os << c << '*' << label_;
  ChartedHermitianMetric out(n_, domain_, [base, c](const ComplexVector& z) -> ComplexMatrix { return base(z) * c; },
                             os.str(), kahler_);
  out.warnings_ = warnings_;
  return out;
}

std::vector<std::string> catalog_metric_names() {
  return {"euclidean", "fubini_study", "complex_hyperbolic", "poincare_disk", "polydisk", "hopf"};
}

ChartedHermitianMetric catalog_metric(const std::string& name, const std::vector<double>& params) {
  const std::string label = format_label(name, params);
  if (name == "euclidean") {
    const int n = dimension_param(params, name);
    return {n, Domain::unbounded(),
            [n](const ComplexVector&) -> ComplexMatrix { return ComplexMatrix::Identity(n, n); }, label,
            KahlerFlag::Yes};
  }
  if (name == "fubini_study") {
    const int n = dimension_param(params, name);
    return {n, Domain::unbounded(),
            [n](const ComplexVector& z) -> ComplexMatrix {
              const double s = 1.0 + z.squaredNorm();
              ComplexMatrix g = ComplexMatrix::Identity(n, n) / s;
              g -= z.conjugate() * z.transpose() / (s * s);
              return g;
            },
            label, KahlerFlag::Yes};
  }
  if (name == "complex_hyperbolic") {
    const int n = dimension_param(params, name);
    return {n, Domain::ball(1.0),
            [n](const ComplexVector& z) -> ComplexMatrix {
              const double s = 1.0 - z.squaredNorm();
              ComplexMatrix g = ComplexMatrix::Identity(n, n) / s;
              g += z.conjugate() * z.transpose() / (s * s);
              return g;
            },
            label, KahlerFlag::Yes};
  }
  if (name == "poincare_disk") {
    const double a = params.empty() ? 1.0 : params[0];
    if (params.size() > 1 || !(a > 0.0)) throw Error(ErrorKind::BadParams, "poincare_disk takes one scale a > 0");
    return {1, Domain::ball(1.0),
            [a](const ComplexVector& z) -> ComplexMatrix {
              const double s = 1.0 - std::norm(z(0));
              ComplexMatrix g(1, 1);
              g(0, 0) = a / (s * s);
              return g;
            },
            label, KahlerFlag::Yes};
  }
  if (name == "polydisk") {
    if (params.empty()) throw Error(ErrorKind::BadParams, "polydisk needs scales a_1..a_n");
    for (double a : params) {
      if (!(a > 0.0)) throw Error(ErrorKind::BadParams, "polydisk scales must be positive");
    }
    const int n = static_cast<int>(params.size());
    return {n, Domain::polydisk(1.0),
            [params, n](const ComplexVector& z) -> ComplexMatrix {
              ComplexMatrix g = ComplexMatrix::Zero(n, n);
              for (int i = 0; i < n; ++i) {
                const double s = 1.0 - std::norm(z(i));
                g(i, i) = params[i] / (s * s);
              }
              return g;
            },
            label, KahlerFlag::Yes};
  }
  if (name == "hopf") {
    const int n = dimension_param(params, name);
    double inner = 0.5, outer = 2.0;
    if (params.size() == 3) {
      inner = params[1];
      outer = params[2];
    } else if (params.size() != 1) {
      throw Error(ErrorKind::BadParams, "hopf takes (n) or (n, inner, outer)");
    }
    if (!(inner > 0.0) || !(outer > inner)) throw Error(ErrorKind::BadParams, "hopf annulus needs 0 < inner < outer");
    return {n, Domain::annulus(inner, outer),
            [n](const ComplexVector& z) -> ComplexMatrix {
              return ComplexMatrix::Identity(n, n) / z.squaredNorm();
            },
            label, KahlerFlag::No};
  }
  throw Error(ErrorKind::UnknownCatalogName, "no catalog metric named '" + name + "'");
}

double auto_step(const ComplexVector& z) { return 1e-3 * std::max(1.0, z.norm()); }

MetricDerivatives metric_derivatives(const ChartedHermitianMetric& m, const ComplexVector& z,
                                     std::optional<double> step) {
  const int n = m.dim();
  const double h = step.value_or(auto_step(z));
  if (!(h > 0.0)) throw Error(ErrorKind::BadParams, "finite-difference step must be positive");
  const double margin = m.domain().margin(z);
  if (margin < fd::kNestedReach * h) {
    std::ostringstream os;
    os << "point is within " << fd::kNestedReach * h << " of the boundary of '" << m.label() << "'";
    throw Error(ErrorKind::DomainMarginError, os.str());
  }

  const RawDerivatives coarse = raw_derivatives(m, z, h);
  const RawDerivatives fine = raw_derivatives(m, z, 0.5 * h);

  MetricDerivatives out;
  out.n = n;
  out.g = m(z);
  out.step = h;
  out.dg.resize(n);
  out.dbar_g.resize(n);
  out.ddbar_g.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    out.dg[i] = fd::wirtinger_dz(coarse.d1, i);
    out.dbar_g[i] = fd::wirtinger_dzbar(coarse.d1, i);
    for (int j = 0; j < n; ++j) out.ddbar_g[i * n + j] = fd::wirtinger_ddbar(coarse.d2, n, i, j);
  }

  // Fourth-order truncation: err(h) ~ 16/15 |D(h) - D(h/2)|; add a roundoff floor.
  const double scale = std::max(1.0, max_abs(out.g.matrix()));
  const double first_floor = 10.0 * kEps * scale / h;
  const double second_floor = 20.0 * kEps * scale / (h * h);
  out.first_error_estimate = 16.0 / 15.0 * max_diff(coarse.d1, fine.d1) + first_floor;
  out.second_error_estimate = 16.0 / 15.0 * max_diff(coarse.d2, fine.d2) + second_floor;
  out.error_estimate = std::max(out.first_error_estimate, out.second_error_estimate);
  return out;
}

double kahler_residue(const MetricDerivatives& d) {
  double r = 0.0;
  for (int i = 0; i < d.n; ++i)
    for (int k = 0; k < d.n; ++k)
      for (int j = 0; j < d.n; ++j) r = std::max(r, std::abs(d.dg[i](k, j) - d.dg[k](i, j)));
  return r;
}

double derivative_hermitian_residue(const MetricDerivatives& d) {
  double r = 0.0;
  for (int j = 0; j < d.n; ++j)
    for (int k = 0; k < d.n; ++k)
      for (int l = 0; l < d.n; ++l) r = std::max(r, std::abs(d.dbar_g[j](k, l) - std::conj(d.dg[j](l, k))));
  return r;
}

}  // namespace chernlab
