#include "chernlab/schwarz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chernlab/curvature.hpp"
#include "chernlab/error.hpp"

namespace chernlab {

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::ChernLu: return "chern-lu";
    case Theorem::AubinYau: return "aubin-yau";
    case Theorem::Family: return "family";
    case Theorem::TraceBound: return "trace-bound";
  }
  return "?";
}

std::string to_string(Preset p) {
  switch (p) {
    case Preset::None: return "none";
    case Preset::ChenChengLu: return "chen_cheng_lu";
    case Preset::RicciOnly: return "ricci_only";
    case Preset::Liouville: return "liouville";
  }
  return "?";
}

std::string to_string(KappaMode k) { return k == KappaMode::FullCone ? "full_cone" : "along_map"; }

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::User: return "user";
    case Provenance::Estimated: return "estimated";
    case Provenance::Derived: return "derived";
    case Provenance::Default: return "default";
  }
  return "?";
}

Theorem parse_theorem(const std::string& s) {
  for (Theorem t : {Theorem::ChernLu, Theorem::AubinYau, Theorem::Family, Theorem::TraceBound})
    if (s == to_string(t)) return t;
  throw Error(ErrorKind::SchemaError, "unknown theorem '" + s + "'");
}

Preset parse_preset(const std::string& s) {
  for (Preset p : {Preset::None, Preset::ChenChengLu, Preset::RicciOnly, Preset::Liouville})
    if (s == to_string(p)) return p;
  throw Error(ErrorKind::SchemaError, "unknown preset '" + s + "'");
}

KappaMode parse_kappa_mode(const std::string& s) {
  if (s == "full_cone") return KappaMode::FullCone;
  if (s == "along_map") return KappaMode::AlongMap;
  throw Error(ErrorKind::SchemaError, "unknown kappa mode '" + s + "'");
}

double HypothesisConstants::get(const std::string& name) const {
  const auto it = values.find(name);
  if (it == values.end()) throw Error(ErrorKind::BadParams, "constant " + name + " is not set");
  return it->second.value;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

double lambda_min(const HermitianForm& A, const HermitianForm& g) { return relative_eigenvalues(A, g)(0); }
double lambda_max(const HermitianForm& A, const HermitianForm& g) {
  const RealVector ev = relative_eigenvalues(A, g);
  return ev(ev.size() - 1);
}

// Running extremum that remembers where it happened.
struct Extreme {
  double value;
  ComplexVector at;
  bool want_max;

  explicit Extreme(bool max) : value(max ? -kInf : kInf), want_max(max) {}
  void offer(double v, const ComplexVector& z) {
    if (want_max ? v > value : v < value) {
      value = v;
      at = z;
    }
  }
};

struct Check {
  HypothesisCheck c;
  explicit Check(std::string name) {
    c.name = std::move(name);
    c.worst = kInf;
  }
  void offer(double slack, const ComplexVector& z, double tol) {
    if (slack < c.worst) {
      c.worst = slack;
      c.worst_point = z;
    }
    if (slack < -tol) c.holds = false;
  }
};

class ConstantTable {
 public:
  ConstantTable(const SchwarzOptions& opt, std::vector<std::string> allowed) : opt_(opt) {
    for (const auto& [k, v] : opt.user_constants) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        throw Error(ErrorKind::BadParams, "constant '" + k + "' does not enter this theorem");
      }
      if (!std::isfinite(v)) throw Error(ErrorKind::BadParams, "constant '" + k + "' is not finite");
    }
  }

  bool user(const std::string& k) const { return opt_.user_constants.count(k) != 0; }

  // User value, else the fallback with the given provenance.
  double use(HypothesisConstants& hc, const std::string& k, double fallback, Provenance prov,
             std::optional<ComplexVector> at = std::nullopt, bool heuristic = false) const {
    Constant c;
    if (user(k)) {
      c.value = opt_.user_constants.at(k);
      c.provenance = Provenance::User;
    } else {
      c.value = fallback;
      c.provenance = prov;
      c.achieved_at = std::move(at);
      c.heuristic = heuristic;
    }
    hc.values[k] = c;
    return c.value;
  }

 private:
  const SchwarzOptions& opt_;
};

// Sign constraints: violations of user-given constants are the caller's
// mistake, violations of fitted ones mean the data cannot satisfy the theorem.
void require(bool ok, const HypothesisConstants& hc, std::initializer_list<const char*> involved,
             const std::string& what) {
  if (ok) return;
  bool any_user = false;
  for (const char* k : involved) {
    const auto it = hc.values.find(k);
    if (it != hc.values.end() && it->second.provenance == Provenance::User) any_user = true;
  }
  std::string detail = what + " (";
  bool first = true;
  for (const char* k : involved) {
    const auto it = hc.values.find(k);
    if (it == hc.values.end()) continue;
    detail += std::string(first ? "" : ", ") + k + " = " + fmt(it->second.value);
    first = false;
  }
  detail += ")";
  throw Error(any_user ? ErrorKind::HypothesisSignError : ErrorKind::InfeasibleHypothesis, detail);
}

double clamp_tiny_negative(double k) { return (k < 0 && k > -1e-8) ? 0.0 : k; }

void check_grid(const SchwarzProblem& p) {
  if (p.grid.empty()) return;
  for (const auto& z : p.grid) {
    if (z.size() != p.omega.dim()) throw Error(ErrorKind::DimensionMismatch, "grid point dimension");
    if (!p.omega.domain().contains(z)) {
      throw Error(ErrorKind::DomainMarginError, "grid point lies outside the source chart");
    }
  }
}

void check_map_dims(const SchwarzProblem& p) {
  if (p.f.source_dim() != p.omega.dim() || p.f.target_dim() != p.eta.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "map dimensions do not match the metrics");
  }
}

int rank_of(const SingularFrameData& s) { return s.rank; }

double sup_rbc(const ChartedHermitianMetric& m, const ComplexVector& w, const FrameSearchConfig& cfg) {
  const HermitianForm h = m(w);
  return rbc_bounds(chern_curvature(m, w), h, cfg).sup;
}

// inf SBC of m at z over frames, or throws UnboundedSbc with the certificate.
double inf_sbc(const ChartedHermitianMetric& m, const ComplexVector& z, const FrameSearchConfig& cfg,
               const SbcOptions& sopt) {
  const SbcFrameResult r = sbc_bound(chern_curvature(m, z), m(z), cfg, sopt);
  if (r.best.status == SbcResult::Status::UnboundedBelow) {
    std::ostringstream os;
    os << "SBC of '" << m.label() << "' is unbounded below at z = (";
    for (int i = 0; i < z.size(); ++i) os << (i ? ", " : "") << z(i).real() << (z(i).imag() < 0 ? "" : "+") << z(i).imag() << "i";
    os << "); certificate: gap " << r.best.gap_index << ", base v = [" << r.best.base.transpose() << "]";
    throw Error(ErrorKind::UnboundedSbc, os.str());
  }
  return r.best.inf_val;
}

// The proof's pointwise quantity: frame matrix of m at z in the source
// singular frame, evaluated at the squared singular values.
double along_map_sbc(const ChartedHermitianMetric& m, const ComplexVector& z, const SingularFrameData& s) {
  if (s.rank < s.lambdas.size()) throw Error(ErrorKind::ZeroSingularValue, "map is rank deficient at the point");
  const FrameCurvatureMatrices fm = curvature_in_frame(chern_curvature(m, z), s.source_frame);
  return sbc_along_map(fm.R_mat, s.lambdas);
}

double kappa_lower_sbc(const SchwarzOptions& opt, const ChartedHermitianMetric& m, const ComplexVector& z,
                       const SingularFrameData& s) {
  return opt.kappa_mode == KappaMode::FullCone ? inf_sbc(m, z, opt.frames, opt.sbc) : along_map_sbc(m, z, s);
}

void finish(SchwarzVerdict& v, const SchwarzOptions& opt, std::vector<Check>& checks) {
  v.hypotheses_hold = true;
  for (auto& c : checks) {
    if (!std::isfinite(c.c.worst)) c.c.worst = 0.0;
    v.hypotheses_hold = v.hypotheses_hold && c.c.holds;
    v.hypothesis_checks.push_back(c.c);
  }
  v.sup_energy = -kInf;
  v.worst_margin = kInf;
  for (const auto& r : v.records) {
    if (r.energy > v.sup_energy) {
      v.sup_energy = r.energy;
      v.sup_point = r.z;
    }
    if (r.margin < v.worst_margin) {
      v.worst_margin = r.margin;
      v.worst_point = r.z;
    }
  }
  if (v.records.empty()) {
    v.sup_energy = 0.0;
    v.worst_margin = 0.0;
  }
  const bool margins_ok = v.worst_margin >= -opt.tol;
  const bool bound_ok = v.sup_energy <= v.bound * (1.0 + opt.tol) + (v.bound == 0.0 ? opt.tol : 0.0);
  v.flags["margins_ok"] = margins_ok;
  v.flags["bound_ok"] = bound_ok;
  v.pass = margins_ok && bound_ok;
  v.notes.push_back("global bound checked as the supremum over the sampled grid; charts are open sets, not compact manifolds");
}

// ---------------------------------------------------------------------------
// Chern-Lu: Ric2_omega >= -C1 omega + C2 f*eta, RBC_eta <= -kappa <= 0.

struct ChernLuSample {
  ComplexVector z;
  HermitianForm g, pull, ric2;
  double energy;
  double rbc_sup;
  int rank;
};

SchwarzVerdict chern_lu_run(const SchwarzProblem& p, const SchwarzOptions& opt, bool full) {
  check_map_dims(p);
  check_grid(p);
  ConstantTable table(opt, {"C1", "C2", "kappa"});
  std::vector<ChernLuSample> samples;
  for (const auto& z : p.grid) {
    ChernLuSample s;
    s.z = z;
    s.g = p.omega(z);
    const ComplexMatrix J = jacobian(p.f, z);
    const ComplexVector w = p.f(z);
    const HermitianForm h = p.eta(w);
    s.pull = pullback_metric(J, h);
    s.energy = energy_density(J, s.g, h);
    s.rank = rank_of(singular_frames(J, s.g, h));
    s.ric2 = ricci(chern_curvature(p.omega, z), s.g, 2);
    s.rbc_sup = sup_rbc(p.eta, w, opt.frames);
    samples.push_back(std::move(s));
  }

  SchwarzVerdict v;
  v.theorem = Theorem::ChernLu;
  HypothesisConstants& hc = v.constants;
  hc.n = p.omega.dim();
  for (const auto& s : samples) hc.r = std::max(hc.r, s.rank);
  const double C2 = table.use(hc, "C2", 0.0, Provenance::Default);

  Extreme c1(true), kap(false);
  for (const auto& s : samples) {
    c1.offer(-lambda_min(s.ric2 - C2 * s.pull, s.g), s.z);
    kap.offer(-s.rbc_sup, s.z);
  }
  const bool heuristic = p.eta.dim() >= 2;
  const double C1 = table.use(hc, "C1", c1.value, Provenance::Estimated, c1.at);
  const double kappa = table.use(hc, "kappa", clamp_tiny_negative(kap.value), Provenance::Estimated, kap.at, heuristic);

  require(C2 >= 0, hc, {"C2"}, "C2 must be nonnegative");
  require(kappa >= 0, hc, {"kappa"}, "RBC of the target must be bounded above by -kappa <= 0");
  require(kappa + C2 > 0, hc, {"kappa", "C2"}, "kappa + C2 must be positive");
  if (hc.r < 1) throw Error(ErrorKind::NearCriticalPoint, "the map has rank zero on the whole grid");

  v.bound = C1 * hc.r / (kappa + C2);
  if (!full) return v;

  std::vector<Check> checks{Check("Ric2_omega >= -C1 omega + C2 f*eta"), Check("RBC_eta <= -kappa")};
  for (const auto& s : samples) {
    checks[0].offer(lambda_min(s.ric2 + C1 * s.g - C2 * s.pull, s.g), s.z, opt.form_tol);
    checks[1].offer(-kappa - s.rbc_sup, s.z, opt.form_tol);
    PointRecord r;
    r.z = s.z;
    r.energy = s.energy;
    r.lhs = laplacian_log_energy(p.f, s.z, p.omega, p.eta);
    r.rhs = -C1 + (kappa + C2) * s.energy / hc.r;
    r.margin = r.lhs - r.rhs;
    v.records.push_back(r);
  }
  if (heuristic) v.notes.push_back("RBC of the target comes from a frame search; kappa is a search-based estimate");
  finish(v, opt, checks);
  return v;
}

// ---------------------------------------------------------------------------
// Aubin-Yau: Ric2_eta <= -C1 eta + C2 (f^-1)*omega, SBC_omega >= -kappa, kappa >= 0.

struct AubinYauSample {
  ComplexVector z, w;
  HermitianForm h, inv_pull, ric2;
  double energy;
  double sbc;
};

SchwarzVerdict aubin_yau_run(const SchwarzProblem& p, const SchwarzOptions& opt, bool full) {
  check_map_dims(p);
  check_grid(p);
  if (p.omega.dim() != p.eta.dim()) {
    throw Error(ErrorKind::RankDeficient, "the map must be biholomorphic onto its image (equal dimensions)");
  }
  ConstantTable table(opt, {"C1", "C2", "kappa"});
  const int n = p.omega.dim();
  std::vector<AubinYauSample> samples;
  for (const auto& z : p.grid) {
    AubinYauSample s;
    s.z = z;
    const HermitianForm g = p.omega(z);
    const ComplexMatrix J = jacobian(p.f, z);
    s.w = p.f(z);
    s.h = p.eta(s.w);
    const SingularFrameData sf = singular_frames(J, g, s.h);
    if (sf.rank < n) throw Error(ErrorKind::RankDeficient, "the map is not immersive at a grid point");
    s.energy = energy_density(J, g, s.h);
    const ComplexMatrix Jinv = J.inverse();
    s.inv_pull = pullback_metric(Jinv, g);
    s.ric2 = ricci(chern_curvature(p.eta, s.w), s.h, 2);
    s.sbc = kappa_lower_sbc(opt, p.omega, z, sf);
    samples.push_back(std::move(s));
  }

  SchwarzVerdict v;
  v.theorem = Theorem::AubinYau;
  HypothesisConstants& hc = v.constants;
  hc.n = n;
  hc.r = n;
  const double C2 = table.use(hc, "C2", 0.0, Provenance::Default);
  Extreme c1(false), kap(true);
  for (const auto& s : samples) {
    c1.offer(-lambda_max(s.ric2 - C2 * s.inv_pull, s.h), s.z);
    kap.offer(-s.sbc, s.z);
  }
  const bool heuristic = opt.kappa_mode == KappaMode::FullCone && n >= 2;
  const double C1 = table.use(hc, "C1", c1.value, Provenance::Estimated, c1.at);
  const double kappa = table.use(hc, "kappa", std::max(0.0, kap.value), Provenance::Estimated, kap.at, heuristic);
  require(C1 > 0, hc, {"C1"}, "C1 must be positive");
  require(kappa >= 0, hc, {"kappa"}, "kappa must be nonnegative");

  v.bound = n * (C2 + kappa) / C1;
  v.proof_bound = (n * C2 + kappa) / C1;
  if (!full) return v;

  std::vector<Check> checks{Check("Ric2_eta <= -C1 eta + C2 (f^-1)*omega"),
                            Check("SBC_omega >= -kappa (" + to_string(opt.kappa_mode) + ")")};
  for (const auto& s : samples) {
    checks[0].offer(-lambda_max(s.ric2 + C1 * s.h - C2 * s.inv_pull, s.h), s.z, opt.form_tol);
    checks[1].offer(s.sbc + kappa, s.z, opt.form_tol);
    PointRecord r;
    r.z = s.z;
    r.energy = s.energy;
    r.lhs = target_laplacian_energy(p.f, s.z, p.omega, p.eta);
    r.rhs = C1 * s.energy - n * (C2 + kappa);
    r.margin = r.lhs - r.rhs;
    r.proof_margin = r.lhs - (C1 * s.energy - n * C2 - kappa);
    v.records.push_back(r);
  }
  v.notes.push_back("verdict uses the displayed inequality with -n(C2 + kappa); proof_margin uses -n C2 - kappa");
  v.notes.push_back("kappa mode: " + to_string(opt.kappa_mode));
  finish(v, opt, checks);
  return v;
}

// ---------------------------------------------------------------------------
// Family: -C1 mu + C2 f*eta <= Ric2_mu <= -C3 mu + C4 omega,
// SBC_omega >= -kappa1, RBC_eta <= -kappa2.

struct FamilySample {
  ComplexVector z;
  HermitianForm g, m, pull, ric2;
  double energy;
  double sbc;
  double rbc_sup;
  int rank;
};

SchwarzVerdict family_run(const SchwarzProblem& p, const SchwarzOptions& opt, bool full) {
  check_map_dims(p);
  check_grid(p);
  if (!p.mu) throw Error(ErrorKind::BadParams, "the family of Schwarz lemmas needs an auxiliary metric mu");
  const ChartedHermitianMetric& mu = *p.mu;
  if (mu.dim() != p.omega.dim()) throw Error(ErrorKind::DimensionMismatch, "mu lives on the source");
  ConstantTable table(opt, {"C1", "C2", "C3", "C4", "kappa1", "kappa2"});
  const int n = p.omega.dim();
  std::vector<FamilySample> samples;
  for (const auto& z : p.grid) {
    FamilySample s;
    s.z = z;
    s.g = p.omega(z);
    s.m = mu(z);
    const ComplexMatrix J = jacobian(p.f, z);
    const ComplexVector w = p.f(z);
    const HermitianForm h = p.eta(w);
    s.pull = pullback_metric(J, h);
    s.energy = energy_density(J, s.g, h);
    s.rank = singular_frames(J, s.g, h).rank;
    s.ric2 = ricci(chern_curvature(mu, z), s.m, 2);
    // kappa1 feeds the Aubin-Yau step for the identity (M, omega) -> (M, mu).
    const SingularFrameData id = singular_frames(ComplexMatrix::Identity(n, n), s.g, s.m);
    s.sbc = kappa_lower_sbc(opt, p.omega, z, id);
    s.rbc_sup = sup_rbc(p.eta, w, opt.frames);
    samples.push_back(std::move(s));
  }

  SchwarzVerdict v;
  v.theorem = Theorem::Family;
  v.preset = p.preset;
  HypothesisConstants& hc = v.constants;
  hc.n = n;
  for (const auto& s : samples) hc.r = std::max(hc.r, s.rank);
  if (hc.r < 1) throw Error(ErrorKind::NearCriticalPoint, "the map has rank zero on the whole grid");
  const int nr = n * hc.r;

  Extreme k1(true), k2(false);
  for (const auto& s : samples) {
    k1.offer(-s.sbc, s.z);
    k2.offer(-s.rbc_sup, s.z);
  }
  const double kappa1 = table.use(hc, "kappa1", std::max(0.0, k1.value), Provenance::Estimated, k1.at,
                                  opt.kappa_mode == KappaMode::FullCone && n >= 2);
  const double kappa2 = table.use(hc, "kappa2", clamp_tiny_negative(k2.value), Provenance::Estimated, k2.at,
                                  p.eta.dim() >= 2);

  double C2 = 0.0;
  if (p.preset == Preset::ChenChengLu) {
    C2 = table.use(hc, "C2", kappa2 * (nr - 1), Provenance::Derived);
  } else {
    C2 = table.use(hc, "C2", 0.0, Provenance::Default);
  }
  const double C4 = table.use(hc, "C4", 0.0, Provenance::Default);

  Extreme c1(true), c3(false);
  for (const auto& s : samples) {
    c1.offer(-lambda_min(s.ric2 - C2 * s.pull, s.m), s.z);
    c3.offer(-lambda_max(s.ric2 - C4 * s.g, s.m), s.z);
  }
  const double C3 = table.use(hc, "C3", c3.value, Provenance::Estimated, c3.at);

  require(kappa1 >= 0, hc, {"kappa1"}, "kappa1 must be nonnegative");
  require(kappa2 >= 0, hc, {"kappa2"}, "RBC of the target must be bounded above by -kappa2 <= 0");
  require(C2 >= 0, hc, {"C2"}, "C2 must be nonnegative");
  require(C3 > 0, hc, {"C3"}, "C3 must be positive");
  require(kappa2 + C2 > 0, hc, {"kappa2", "C2"}, "kappa2 + C2 must be positive");

  double C1 = 0.0;
  std::vector<Check> preset_checks;
  switch (p.preset) {
    case Preset::ChenChengLu: {
      require(C4 == 0.0, hc, {"C4"}, "the Chen-Cheng-Lu form takes C4 = 0");
      require(kappa2 > 0, hc, {"kappa2"}, "the Chen-Cheng-Lu form divides by kappa2");
      C1 = table.use(hc, "C1", (kappa2 + C2) / (kappa2 * nr) * C3, Provenance::Derived);
      Check c("C2 >= kappa2 (n r - 1)");
      c.offer(C2 - kappa2 * (nr - 1), ComplexVector(), opt.form_tol);
      preset_checks.push_back(c);
      v.bound = kappa1 / kappa2;
      break;
    }
    case Preset::RicciOnly: {
      C1 = table.use(hc, "C1", c1.value, Provenance::Estimated, c1.at);
      Check c("n r (kappa1 + C4) <= kappa2 + C2");
      c.offer(kappa2 + C2 - nr * (kappa1 + C4), ComplexVector(), opt.form_tol);
      preset_checks.push_back(c);
      v.bound = C1 / C3;
      break;
    }
    case Preset::Liouville:
    case Preset::None: {
      C1 = table.use(hc, "C1", c1.value, Provenance::Estimated, c1.at);
      v.bound = C1 * nr * (kappa1 + C4) / (C3 * (kappa2 + C2));
      if (p.preset == Preset::Liouville) {
        Check a("C1 > 0 and C4 < 0");
        a.offer(std::min(C1, -C4) > 0 ? 0.0 : std::min(C1, -C4) - 1.0, ComplexVector(), 0.0);
        Check b("0 <= kappa1 <= -C4");
        b.offer(-C4 - kappa1, ComplexVector(), opt.form_tol);
        Check c("RBC_eta < 0 (kappa2 > 0)");
        c.offer(kappa2 > 0 ? 0.0 : -1.0, ComplexVector(), 0.0);
        preset_checks.push_back(a);
        preset_checks.push_back(b);
        preset_checks.push_back(c);
      }
      break;
    }
  }
  if (!full) return v;

  std::vector<Check> checks{Check("Ric2_mu >= -C1 mu + C2 f*eta"), Check("Ric2_mu <= -C3 mu + C4 omega"),
                            Check("SBC_omega >= -kappa1 (" + to_string(opt.kappa_mode) + ")"),
                            Check("RBC_eta <= -kappa2")};
  for (const auto& s : samples) {
    checks[0].offer(lambda_min(s.ric2 + C1 * s.m - C2 * s.pull, s.m), s.z, opt.form_tol);
    checks[1].offer(-lambda_max(s.ric2 + C3 * s.m - C4 * s.g, s.m), s.z, opt.form_tol);
    checks[2].offer(s.sbc + kappa1, s.z, opt.form_tol);
    checks[3].offer(-kappa2 - s.rbc_sup, s.z, opt.form_tol);
    PointRecord r;
    r.z = s.z;
    r.energy = s.energy;
    r.lhs = s.energy;
    r.rhs = v.bound;
    r.margin = v.bound - s.energy;
    v.records.push_back(r);
  }
  for (auto& c : preset_checks) checks.push_back(c);
  finish(v, opt, checks);
  if (p.preset == Preset::Liouville) {
    // Certified hypotheses force |df|^2 <= bound <= 0, so no map with
    // nonzero energy can exist.
    v.flags["liouville_forced"] = v.hypotheses_hold && v.bound <= 0.0;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Trace bound for the identity: SBC_omega >= -kappa, Ric2_eta <= -C1 eta + C2 omega.

struct TraceSample {
  ComplexVector z;
  HermitianForm g, h, ric2;
  double trace;
  double sbc;
};

SchwarzVerdict trace_bound_run(const SchwarzProblem& p, const SchwarzOptions& opt, bool full) {
  check_grid(p);
  if (p.omega.dim() != p.eta.dim()) throw Error(ErrorKind::DimensionMismatch, "omega and eta live on one manifold");
  ConstantTable table(opt, {"C1", "C2", "kappa"});
  const int n = p.omega.dim();
  std::vector<TraceSample> samples;
  for (const auto& z : p.grid) {
    TraceSample s;
    s.z = z;
    s.g = p.omega(z);
    s.h = p.eta(z);
    s.trace = trace_with(s.h, s.g);
    s.ric2 = ricci(chern_curvature(p.eta, z), s.h, 2);
    const SingularFrameData id = singular_frames(ComplexMatrix::Identity(n, n), s.g, s.h);
    s.sbc = kappa_lower_sbc(opt, p.omega, z, id);
    samples.push_back(std::move(s));
  }

  SchwarzVerdict v;
  v.theorem = Theorem::TraceBound;
  HypothesisConstants& hc = v.constants;
  hc.n = n;
  hc.r = n;
  const double C2 = table.use(hc, "C2", 0.0, Provenance::Default);
  Extreme c1(false), kap(true);
  for (const auto& s : samples) {
    c1.offer(-lambda_max(s.ric2 - C2 * s.g, s.h), s.z);
    kap.offer(-s.sbc, s.z);
  }
  const double C1 = table.use(hc, "C1", c1.value, Provenance::Estimated, c1.at);
  const double kappa = table.use(hc, "kappa", std::max(0.0, kap.value), Provenance::Estimated, kap.at,
                                 opt.kappa_mode == KappaMode::FullCone && n >= 2);
  require(C1 > 0, hc, {"C1"}, "C1 must be positive");
  require(kappa >= 0, hc, {"kappa"}, "kappa must be nonnegative");
  v.bound = (kappa + n * C2) / C1;
  if (!full) return v;

  std::vector<Check> checks{Check("Ric2_eta <= -C1 eta + C2 omega"),
                            Check("SBC_omega >= -kappa (" + to_string(opt.kappa_mode) + ")")};
  for (const auto& s : samples) {
    checks[0].offer(-lambda_max(s.ric2 + C1 * s.h - C2 * s.g, s.h), s.z, opt.form_tol);
    checks[1].offer(s.sbc + kappa, s.z, opt.form_tol);
    PointRecord r;
    r.z = s.z;
    r.energy = s.trace;
    r.lhs = s.trace;
    r.rhs = v.bound;
    r.margin = v.bound - s.trace;
    v.records.push_back(r);
  }
  finish(v, opt, checks);
  // The automorphism statement itself is not computed; this is the
  // inequality it rests on.
  v.flags["aut_trivial"] = v.hypotheses_hold && kappa <= -C2;
  return v;
}

SchwarzVerdict run(const SchwarzProblem& p, const SchwarzOptions& opt, bool full) {
  if (p.preset != Preset::None && p.theorem != Theorem::Family) {
    throw Error(ErrorKind::BadParams, "presets apply to the family of Schwarz lemmas only");
  }
  switch (p.theorem) {
    case Theorem::ChernLu: return chern_lu_run(p, opt, full);
    case Theorem::AubinYau: return aubin_yau_run(p, opt, full);
    case Theorem::Family: return family_run(p, opt, full);
    case Theorem::TraceBound: return trace_bound_run(p, opt, full);
  }
  throw Error(ErrorKind::BadParams, "unknown theorem");
}

}  // namespace

HypothesisConstants estimate_hypotheses(const SchwarzProblem& p, const SchwarzOptions& opt) {
  return run(p, opt, false).constants;
}

SchwarzVerdict verify_schwarz(const SchwarzProblem& p, const SchwarzOptions& opt) { return run(p, opt, true); }

SchwarzVerdict chern_lu_verify(SchwarzProblem p, const SchwarzOptions& opt) {
  p.theorem = Theorem::ChernLu;
  return verify_schwarz(p, opt);
}

SchwarzVerdict aubin_yau_verify(SchwarzProblem p, const SchwarzOptions& opt) {
  p.theorem = Theorem::AubinYau;
  return verify_schwarz(p, opt);
}

SchwarzVerdict family_verify(SchwarzProblem p, const SchwarzOptions& opt) {
  p.theorem = Theorem::Family;
  return verify_schwarz(p, opt);
}

SchwarzVerdict trace_bound_verify(SchwarzProblem p, const SchwarzOptions& opt) {
  p.theorem = Theorem::TraceBound;
  p.preset = Preset::None;
  return verify_schwarz(p, opt);
}

}  // namespace chernlab
