#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chernlab/tensor.hpp"

namespace chernlab {

// Extremes of the Rayleigh quotient v^T M v / v^T v over the closed
// nonnegative orthant. Only the symmetric part of M matters.
struct OrthantExtremum {
  enum class Method { ExactFacial, Multistart };

  double min_val = 0.0;
  double max_val = 0.0;
  RealVector argmin;
  RealVector argmax;
  Method method = Method::ExactFacial;
  // Coordinates (0-based) where argmin / argmax are nonzero.
  std::vector<int> min_face;
  std::vector<int> max_face;
};

std::string to_string(OrthantExtremum::Method m);

inline constexpr int kExactFacialMaxDim = 4;

OrthantExtremum orthant_rayleigh_extrema(const RealMatrix& M);
// Same, forcing the multistart path regardless of n (for cross-checks).
OrthantExtremum orthant_rayleigh_extrema_multistart(const RealMatrix& M, int n_starts = 64,
                                                    std::uint64_t seed = 0);

struct FrameSearchConfig {
  int n_starts = 8;
  int max_iter = 200;
  double step_tol = 1e-6;
  std::uint64_t seed = 0;
};

struct RbcBounds {
  double inf = 0.0;
  double sup = 0.0;
  UnitaryFrame frame_inf;
  UnitaryFrame frame_sup;
  OrthantExtremum at_inf;
  OrthantExtremum at_sup;
  // True when the numbers are search results rather than exact values.
  bool heuristic = false;
  std::vector<std::string> warnings;
};

RbcBounds rbc_bounds(const ChernCurvatureTensor& R, const HermitianForm& g,
                     const FrameSearchConfig& cfg = {});

// u_v^T M v with u_v the entrywise inverse of v.
double sbc_value(const RealMatrix& M, const RealVector& v);

struct SbcOptions {
  double box = 10.0;      // upper bound on each gap coordinate during the search
  int n_starts = 16;
  int max_iter = 400;
  double unbounded_tol = 1e-8;
  double marginal_tol = 1e-6;
  std::uint64_t seed = 0;
};

struct SbcResult {
  enum class Status { Finite, UnboundedBelow };

  Status status = Status::Finite;
  double inf_val = 0.0;
  RealVector arg;  // ordered v_1 >= ... >= v_n = 1
  // Finite results whose smallest gap coefficient is near zero.
  bool marginal = false;
  // Smallest gap coefficient seen, normalized by max(1, max |M|).
  double margin = 0.0;
  // Unbounded case: the coordinates v_1..v_gap get multiplied by e^t.
  int gap_index = 0;  // 1-based
  RealVector base;
  std::vector<std::string> warnings;
};

std::string to_string(SbcResult::Status s);

SbcResult sbc_infimum(const RealMatrix& M, const SbcOptions& opt = {});

// Objective along the divergence certificate.
double sbc_certificate_value(const RealMatrix& M, const SbcResult& r, double t);

struct SbcFrameResult {
  SbcResult best;
  UnitaryFrame frame;
  bool heuristic = false;
  std::vector<std::string> warnings;
};

SbcFrameResult sbc_bound(const ChernCurvatureTensor& R, const HermitianForm& g,
                         const FrameSearchConfig& cfg = {}, const SbcOptions& opt = {});

// sum_{a,c} M(a, c) lambda_c^2 / lambda_a^2, i.e. sbc_value at v = lambda^2.
// lambda must be positive and nonincreasing.
double sbc_along_map(const RealMatrix& M, const RealVector& lambda);

}  // namespace chernlab
