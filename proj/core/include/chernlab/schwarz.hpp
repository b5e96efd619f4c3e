#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chernlab/cone.hpp"
#include "chernlab/holomap.hpp"
#include "chernlab/metric.hpp"

namespace chernlab {

// Uniform box grid in the 2n real coordinates, row-major with the last real
// coordinate varying fastest. Text form: "box:center=0,0;half=0.4;per-axis=5"
// where center lists 2n reals (or one value broadcast to all coordinates).
struct GridSpec {
  std::vector<double> center;
  double half = 0.0;
  int per_axis = 1;

  static GridSpec parse(const std::string& text);
  std::string to_string() const;
  std::vector<ComplexVector> points(int n) const;
};

enum class Theorem { ChernLu, AubinYau, Family, TraceBound };
enum class Preset { None, ChenChengLu, RicciOnly, Liouville };
enum class KappaMode { FullCone, AlongMap };

std::string to_string(Theorem t);
std::string to_string(Preset p);
std::string to_string(KappaMode k);
Theorem parse_theorem(const std::string& s);
Preset parse_preset(const std::string& s);
KappaMode parse_kappa_mode(const std::string& s);

enum class Provenance { User, Estimated, Derived, Default };
std::string to_string(Provenance p);

struct Constant {
  double value = 0.0;
  Provenance provenance = Provenance::Default;
  std::optional<ComplexVector> achieved_at;
  bool heuristic = false;  // came out of a frame search
};

struct HypothesisConstants {
  int n = 0;
  int r = 0;
  std::map<std::string, Constant> values;  // C1..C4, kappa, kappa1, kappa2

  bool has(const std::string& name) const { return values.count(name) != 0; }
  double get(const std::string& name) const;
};

struct SchwarzProblem {
  Theorem theorem = Theorem::ChernLu;
  Preset preset = Preset::None;
  ChartedHermitianMetric omega;
  ChartedHermitianMetric eta;
  std::optional<ChartedHermitianMetric> mu;  // family only
  HolomorphicMapModel f;                     // ignored by the trace bound
  std::vector<ComplexVector> grid;
};

struct SchwarzOptions {
  std::map<std::string, double> user_constants;
  KappaMode kappa_mode = KappaMode::FullCone;
  FrameSearchConfig frames;
  SbcOptions sbc;
  double tol = 1e-5;
  double form_tol = 1e-7;  // eigenvalue tolerance for form inequalities
};

struct PointRecord {
  ComplexVector z;
  double energy = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  // Aubin-Yau only: margin against the sharper inequality from the proof.
  std::optional<double> proof_margin;
};

struct HypothesisCheck {
  std::string name;
  bool holds = true;
  double worst = 0.0;  // most negative slack seen
  ComplexVector worst_point;
};

struct SchwarzVerdict {
  Theorem theorem = Theorem::ChernLu;
  Preset preset = Preset::None;
  HypothesisConstants constants;
  std::vector<PointRecord> records;
  double bound = 0.0;
  std::optional<double> proof_bound;
  double sup_energy = 0.0;
  ComplexVector sup_point;
  double worst_margin = 0.0;
  ComplexVector worst_point;
  bool pass = false;
  bool hypotheses_hold = true;
  std::vector<HypothesisCheck> hypothesis_checks;
  std::map<std::string, bool> flags;
  std::vector<std::string> notes;
};

// Fits every constant not supplied by the user to the tightest value valid on
// the grid. Throws InfeasibleHypothesis / UnboundedSbc / HypothesisSignError.
HypothesisConstants estimate_hypotheses(const SchwarzProblem& p, const SchwarzOptions& opt);

// Estimates (where needed), checks hypotheses, and checks the differential
// inequality and global bound at every grid point.
SchwarzVerdict verify_schwarz(const SchwarzProblem& p, const SchwarzOptions& opt);

SchwarzVerdict chern_lu_verify(SchwarzProblem p, const SchwarzOptions& opt);
SchwarzVerdict aubin_yau_verify(SchwarzProblem p, const SchwarzOptions& opt);
SchwarzVerdict family_verify(SchwarzProblem p, const SchwarzOptions& opt);
SchwarzVerdict trace_bound_verify(SchwarzProblem p, const SchwarzOptions& opt);

// ---------------------------------------------------------------------------
// Standalone identities

struct MomentResult {
  Complex estimate;
  double target = 0.0;
  double abs_err = 0.0;
  double std_error = 0.0;
  bool within_3_sigma = false;
};

// Monte Carlo mean of w_i conj(w_j) w_k conj(w_l) over the unit sphere in C^n
// (indices 0-based) against (d_ij d_kl + d_il d_kj) / (n (n + 1)).
MomentResult fs_moment_check(int n, std::array<int, 4> idx, long n_samples, std::uint64_t seed);

struct AveragedHscResult {
  double lhs = 0.0;
  double rhs = 0.0;          // 1/(n(n+1)) * (b^2)^T (R_mat + P_mat) b^2
  double rhs_doubled = 0.0;  // the same with coefficient 2/(n(n+1))
  double abs_err = 0.0;
  double std_error = 0.0;
  bool within_3_sigma = false;
};

// Sphere average of sum R_{i jbar k lbar} b_i w_i b_j conj(w_j) b_k w_k b_l conj(w_l),
// with R given in a unitary frame.
AveragedHscResult averaged_hsc_check(const ChernCurvatureTensor& R_frame, const RealVector& b,
                                     long n_samples, std::uint64_t seed);

struct Theorem23Result {
  int n = 0;
  int trials = 0;
  // max over trials and v of |q(P + R) - q(R)|, q the Rayleigh quotient.
  double literal_discrepancy = 0.0;
  // max |q(P + R) - q(Sigma)|, Sigma = diag(2 R_{k kbar k kbar}).
  double sigma_discrepancy = 0.0;
  // max |q(P + R) - 2 q(R)|.
  double multiple_discrepancy = 0.0;
  // max |q(R) - q(Sigma / 2)|.
  double rbc_discrepancy = 0.0;
  bool literal_holds = false;
  bool multiple_holds = false;
};

// Random tensors with conjugation symmetry and R_{i jbar k lbar} = -R_{k lbar i jbar}
// whenever the indices are not all equal; the all-equal entries are random
// reals unless zero_diagonal is set.
ChernCurvatureTensor antisymmetric_curvature_sample(int n, std::uint64_t seed, bool zero_diagonal = false);

Theorem23Result theorem23_check(int n, int trials, std::uint64_t seed, double tol, bool zero_diagonal = false);

}  // namespace chernlab
