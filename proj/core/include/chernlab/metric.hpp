#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chernlab/tensor.hpp"

namespace chernlab {

// Coordinate domain of a chart in C^n.
struct Domain {
  enum class Kind { Unbounded, Ball, Box, Polydisk, Annulus };

  Kind kind = Kind::Unbounded;
  ComplexVector center;      // empty means the origin
  double radius = 0.0;       // ball/polydisk radius, box half-width, annulus outer radius
  double inner_radius = 0.0; // annulus only

  static Domain unbounded();
  static Domain ball(double radius, ComplexVector center = {});
  static Domain box(double half_width, ComplexVector center = {});
  static Domain polydisk(double radius);
  static Domain annulus(double inner, double outer);

  // Distance from z to the boundary (positive inside), in the norm matching
  // the domain shape.
  double margin(const ComplexVector& z) const;
  bool contains(const ComplexVector& z) const { return margin(z) > 0.0; }
  ComplexVector center_point(int n) const;
  // A representative radius for probing; for unbounded charts this is 1.
  double probe_radius() const;
};

enum class KahlerFlag { Yes, No, Unknown };

class ChartedHermitianMetric {
 public:
  using Evaluator = std::function<ComplexMatrix(const ComplexVector&)>;

  ChartedHermitianMetric() = default;
  ChartedHermitianMetric(int n, Domain domain, Evaluator evaluator, std::string label,
                         KahlerFlag kahler);

  int dim() const { return n_; }
  const Domain& domain() const { return domain_; }
  const std::string& label() const { return label_; }
  KahlerFlag kahler_flag() const { return kahler_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  // Raw evaluator output, unsymmetrized.
  ComplexMatrix raw(const ComplexVector& z) const;
  // Hermitian-symmetrized value g(z).
  HermitianForm operator()(const ComplexVector& z) const;

  // c * g on the same chart.
  ChartedHermitianMetric scaled(double c) const;

 private:
  int n_ = 0;
  Domain domain_;
  Evaluator eval_;
  std::string label_;
  KahlerFlag kahler_ = KahlerFlag::Unknown;
  std::vector<std::string> warnings_;
};

// euclidean(n), fubini_study(n), complex_hyperbolic(n), poincare_disk(a),
// polydisk(a_1..a_n), hopf(n [, inner, outer]).
ChartedHermitianMetric catalog_metric(const std::string& name, const std::vector<double>& params);
std::vector<std::string> catalog_metric_names();

struct MetricDerivatives {
  int n = 0;
  HermitianForm g;
  std::vector<ComplexMatrix> dg;       // dg[i](k, l)          = d g_{k lbar} / d z_i
  std::vector<ComplexMatrix> dbar_g;   // dbar_g[j](k, l)      = d g_{k lbar} / d zbar_j
  std::vector<ComplexMatrix> ddbar_g;  // ddbar_g[i*n + j](k, l) = d^2 g_{k lbar} / d z_i d zbar_j
  double step = 0.0;
  double error_estimate = 0.0;         // first and mixed derivatives, absolute
  double first_error_estimate = 0.0;
  double second_error_estimate = 0.0;

  const ComplexMatrix& ddbar(int i, int j) const { return ddbar_g[static_cast<std::size_t>(i) * n + j]; }
};

double auto_step(const ComplexVector& z);

MetricDerivatives metric_derivatives(const ChartedHermitianMetric& m, const ComplexVector& z,
                                     std::optional<double> step = std::nullopt);

// max |d_i g_{k jbar} - d_k g_{i jbar}|; zero for Kahler metrics.
double kahler_residue(const MetricDerivatives& d);

// max |dbar_g[j](k, l) - conj(dg[j](l, k))|.
double derivative_hermitian_residue(const MetricDerivatives& d);

}  // namespace chernlab
