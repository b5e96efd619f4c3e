// Acceptance run: one PASS/FAIL line per criterion. With --criterion N only
// that criterion runs; the exit status is nonzero iff a run criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "chernlab/cone.hpp"
#include "chernlab/curvature.hpp"
#include "chernlab/error.hpp"
#include "chernlab/schwarz.hpp"
#include "oracles.hpp"
#include "report/scenario.hpp"

using namespace chernlab;

namespace {

// Tolerances and budgets, fixed here.
constexpr double kCurvatureRelTol = 1e-6;
constexpr double kCurvatureSeconds = 10.0;
constexpr double kTraceCollapseTol = 1e-6;
constexpr double kHopfResidueFloor = 1e-2;
constexpr long kMomentSamples = 1000000;
constexpr double kMomentSeconds = 5.0;
constexpr double kLiteralTol = 1e-10;
constexpr int kSimplexResolution = 400;
constexpr int kSimplexMatrices = 200;
constexpr double kSimplexTol = 1e-4;
constexpr double kSimplexSeconds = 30.0;
constexpr double kModelTol = 1e-3;
constexpr double kCertificateLevel = -1e6;
constexpr double kSharpnessTol = 1e-4;
constexpr double kPointwiseTol = 1e-5;

const std::string kScenarioDir = CHERNLAB_SCENARIO_DIR;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Line {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Line criterion1() {
  const auto t0 = Clock::now();
  oracle::Gen gen(1001);
  double worst = 0.0;
  std::string worst_name;
  auto track = [&](const std::string& name, double e) {
    if (e > worst) {
      worst = e;
      worst_name = name;
    }
  };
  const ChartedHermitianMetric euc = catalog_metric("euclidean", {2});
  const ChartedHermitianMetric poi = catalog_metric("poincare_disk", {1});
  const ChartedHermitianMetric fs = catalog_metric("fubini_study", {2});
  const ChartedHermitianMetric hyp = catalog_metric("complex_hyperbolic", {2});
  const ChartedHermitianMetric hopf = catalog_metric("hopf", {2});
  for (int t = 0; t < 20; ++t) {
    ComplexVector z = gen.in_shell(2, 0.0, 2.0);
    track("euclidean", oracle::relative_error(chern_curvature(euc, z), oracle::euclidean_curvature(2)));
    z = gen.in_shell(1, 0.0, 0.9);
    track("poincare_disk", oracle::relative_error(chern_curvature(poi, z), oracle::poincare_curvature(z, 1.0)));
    z = gen.in_shell(2, 0.0, 2.0);
    track("fubini_study", oracle::relative_error(chern_curvature(fs, z), oracle::fs_curvature(z)));
    z = gen.in_shell(2, 0.0, 0.9);
    track("complex_hyperbolic", oracle::relative_error(chern_curvature(hyp, z), oracle::hyperbolic_curvature(z)));
    z = gen.in_shell(2, 0.6, 1.9);
    track("hopf", oracle::relative_error(chern_curvature(hopf, z), oracle::hopf_curvature(z)));
  }
  const double secs = seconds_since(t0);
  return {worst < kCurvatureRelTol && secs < kCurvatureSeconds,
          "max relative error " + fmt("%.3e", worst) + " (" + worst_name + "), " + fmt("%.2f", secs) + " s"};
}

Line criterion2() {
  oracle::Gen gen(1002);
  double worst = 0.0;
  const std::vector<std::pair<std::string, std::vector<double>>> kahler{
      {"euclidean", {2}}, {"fubini_study", {2}}, {"complex_hyperbolic", {2}}, {"poincare_disk", {1}}, {"polydisk", {1, 2}}};
  for (const auto& [name, params] : kahler) {
    const ChartedHermitianMetric m = catalog_metric(name, params);
    for (int t = 0; t < 20; ++t) {
      const ComplexVector z = gen.in_polydisk(m.dim(), 0.6);
      const CurvatureReport r = curvature_report(m, z);
      const double scale = std::max(1.0, r.ric1.matrix().cwiseAbs().maxCoeff());
      worst = std::max(worst, (r.ric1.matrix() - r.ric2.matrix()).cwiseAbs().maxCoeff() / scale);
      worst = std::max(worst, (r.ric1.matrix() - r.ric3.matrix()).cwiseAbs().maxCoeff() / scale);
    }
  }
  const ChartedHermitianMetric hopf = catalog_metric("hopf", {2});
  ComplexVector z(2);
  z << Complex(0.7, 0.3), Complex(-0.4, 0.6);
  const CurvatureReport h = curvature_report(hopf, z);
  return {worst < kTraceCollapseTol && !h.kahler.holds && h.kahler.residue > kHopfResidueFloor,
          "Kahler trace spread " + fmt("%.3e", worst) + "; hopf symmetry residue " + fmt("%.3f", h.kahler.residue) +
              (h.kahler.holds ? " (holds)" : " (violated)")};
}

Line criterion3() {
  const auto t0 = Clock::now();
  const MomentResult a = fs_moment_check(2, {0, 0, 0, 0}, kMomentSamples, 31);
  const MomentResult b = fs_moment_check(2, {0, 0, 1, 1}, kMomentSamples, 32);
  const double secs = seconds_since(t0);
  return {a.within_3_sigma && b.within_3_sigma && secs < kMomentSeconds,
          "(1,1,1,1) " + fmt("%.6f", a.estimate.real()) + " vs 1/3, err " + fmt("%.2e", a.abs_err) + " / 3se " +
              fmt("%.2e", 3 * a.std_error) + "; (1,1,2,2) " + fmt("%.6f", b.estimate.real()) + " vs 1/6, err " +
              fmt("%.2e", b.abs_err) + " / 3se " + fmt("%.2e", 3 * b.std_error) + "; " + fmt("%.2f", secs) + " s"};
}

Line criterion4() {
  const Theorem23Result r = theorem23_check(3, 100, 41, kLiteralTol);
  const Theorem23Result zd = theorem23_check(3, 100, 41, kLiteralTol, true);
  std::printf("  info: |q(P+R) - 2 q(R)| max %.3e (factor-two form %s)\n", r.multiple_discrepancy,
              r.multiple_holds ? "holds" : "fails");
  std::printf("  info: |q(P+R) - q(Sigma)| max %.3e; |q(R) - q(Sigma/2)| max %.3e\n", r.sigma_discrepancy,
              r.rbc_discrepancy);
  std::printf("  info: zero all-equal entries: literal discrepancy %.3e (%s)\n", zd.literal_discrepancy,
              zd.literal_holds ? "holds" : "fails");
  std::printf("  info: the literal form needs R_kkkk = 0; the antisymmetry gives P = R off the all-equal entries\n");
  return {r.literal_discrepancy < kLiteralTol, "max |v^t(P+R)v - v^t R v| = " + fmt("%.3e", r.literal_discrepancy)};
}

Line criterion5() {
  const auto t0 = Clock::now();
  oracle::Gen gen(1005);
  double worst = 0.0;
  for (int t = 0; t < kSimplexMatrices; ++t) {
    const RealMatrix M = gen.symmetric(3);
    const OrthantExtremum e = orthant_rayleigh_extrema(M);
    double lo = 1e300, hi = -1e300;
    const int k = kSimplexResolution;
    for (int a = 0; a <= k; ++a)
      for (int b = 0; a + b <= k; ++b) {
        const double x = a, y = b, w = k - a - b;
        const double num = M(0, 0) * x * x + M(1, 1) * y * y + M(2, 2) * w * w +
                           2.0 * (M(0, 1) * x * y + M(0, 2) * x * w + M(1, 2) * y * w);
        const double q = num / (x * x + y * y + w * w);
        lo = std::min(lo, q);
        hi = std::max(hi, q);
      }
    worst = std::max({worst, std::abs(e.min_val - lo), std::abs(e.max_val - hi)});
  }
  const double secs = seconds_since(t0);
  return {worst < kSimplexTol && secs < kSimplexSeconds,
          "max discrepancy " + fmt("%.3e", worst) + " over " + std::to_string(kSimplexMatrices) + " matrices, " +
              fmt("%.2f", secs) + " s"};
}

Line criterion6() {
  const ChartedHermitianMetric fs = catalog_metric("fubini_study", {2});
  const ChartedHermitianMetric hyp = catalog_metric("complex_hyperbolic", {2});
  const ComplexVector z = ComplexVector::Zero(2);
  const RbcBounds rb = rbc_bounds(chern_curvature(fs, z), fs(z));
  const SbcFrameResult sb = sbc_bound(chern_curvature(fs, z), fs(z));
  const ChernCurvatureTensor Rh = chern_curvature(hyp, z);
  const SbcFrameResult hb = sbc_bound(Rh, hyp(z));
  bool cert = hb.best.status == SbcResult::Status::UnboundedBelow;
  double v20 = 0.0;
  if (cert) {
    const RealMatrix M = curvature_in_frame(Rh, hb.frame).R_mat;
    double prev = sbc_certificate_value(M, hb.best, 0.0);
    for (double t : {5.0, 10.0, 20.0}) {
      const double v = sbc_certificate_value(M, hb.best, t);
      cert = cert && v < prev;
      prev = v;
    }
    v20 = prev;
    cert = cert && v20 < kCertificateLevel;
  }
  const bool fs_ok = std::abs(rb.inf - 2.0) < kModelTol && std::abs(rb.sup - 3.0) < kModelTol &&
                     sb.best.status == SbcResult::Status::Finite && std::abs(sb.best.inf_val - 6.0) < kModelTol;
  return {fs_ok && cert, "fubini_study RBC [" + fmt("%.6f", rb.inf) + ", " + fmt("%.6f", rb.sup) + "], SBC " +
                             fmt("%.6f", sb.best.inf_val) + "; complex_hyperbolic " + to_string(hb.best.status) +
                             ", certificate at t=20 " + fmt("%.3e", v20)};
}

SchwarzProblem disk_problem(Theorem th, double c) {
  SchwarzProblem p;
  p.theorem = th;
  p.omega = catalog_metric("poincare_disk", {1});
  p.eta = p.omega.scaled(c);
  p.f = catalog_map("identity", {1});
  p.grid = GridSpec::parse("box:center=0;half=0.4;per-axis=9").points(1);
  return p;
}

Line criterion7() {
  bool ok = true;
  double worst_gap = 0.0, worst_margin = 1e300;
  for (double c : {0.5, 1.0, 3.0}) {
    for (Theorem th : {Theorem::ChernLu, Theorem::AubinYau}) {
      const SchwarzVerdict v = verify_schwarz(disk_problem(th, c), {});
      const double gap = std::abs(v.bound - v.sup_energy);
      worst_gap = std::max(worst_gap, gap);
      worst_margin = std::min(worst_margin, v.worst_margin);
      ok = ok && v.pass && gap < kSharpnessTol && std::abs(v.sup_energy - c) < kSharpnessTol &&
           v.worst_margin >= -kPointwiseTol && v.records.size() == 81;
    }
  }
  return {ok, "max |bound - sup energy| " + fmt("%.3e", worst_gap) + ", worst pointwise margin " +
                  fmt("%.3e", worst_margin)};
}

Line criterion8() {
  using namespace chernlab::report;
  const RunResult r = run_scenario(parse_scenario(load_json_file(kScenarioDir + "/negative_hypotheses.json")));
  int total = 0, false_passes = 0, unlocalized = 0;
  for (const auto& t : r.report["tasks"]) {
    ++total;
    if (t["status"] != "ok" || t["verdict"] != "fail") {
      ++false_passes;
      continue;
    }
    const auto wp = t["result"]["worst_point"].get<std::vector<double>>();
    if (t["result"]["worst_margin"].get<double>() >= 0.0 || wp.size() != 2 || std::abs(wp[0]) > 0.4 + 1e-12 ||
        std::abs(wp[1]) > 0.4 + 1e-12) {
      ++unlocalized;
    }
  }
  // Library-level cases on top of the scenario file.
  SchwarzOptions stale;
  stale.user_constants = {{"C1", 2.0}, {"kappa", 2.0}};
  for (double c : {2.0, 4.0}) {
    for (Theorem th : {Theorem::ChernLu, Theorem::AubinYau, Theorem::TraceBound}) {
      ++total;
      const SchwarzVerdict v = verify_schwarz(disk_problem(th, c), stale);
      if (v.pass) ++false_passes;
      if (v.worst_margin >= 0.0) ++unlocalized;
    }
  }
  return {false_passes == 0 && unlocalized == 0 && total > 0,
          std::to_string(total) + " negative cases, " + std::to_string(false_passes) + " false passes, " +
              std::to_string(unlocalized) + " without a localized worst point"};
}

Line criterion9() {
  using namespace chernlab::report;
  bool same = true;
  std::size_t bytes = 0;
  for (const char* f : {"schwarz_sharpness.json", "model_cones.json", "identities.json"}) {
    const Scenario s = parse_scenario(load_json_file(kScenarioDir + "/" + f));
    const std::string a = run_scenario(s).report.dump(2);
    const std::string b = run_scenario(parse_scenario(load_json_file(kScenarioDir + "/" + f))).report.dump(2);
    same = same && a == b;
    bytes += a.size();
  }
  return {same, "three scenarios, " + std::to_string(bytes) + " report bytes compared"};
}

const std::vector<std::pair<std::string, std::function<Line()>>> kCriteria{
    {"FD curvature matches closed forms", criterion1},
    {"Kahler trace collapse, Hopf breaks symmetry", criterion2},
    {"Fubini-Study sphere moments", criterion3},
    {"P + R and R give equal orthant quotients (literal)", criterion4},
    {"facial enumeration vs simplex brute force", criterion5},
    {"RBC/SBC model values and divergence certificate", criterion6},
    {"Schwarz sharpness on rescaled Poincare disks", criterion7},
    {"violated hypotheses never pass", criterion8},
    {"byte-identical reports", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  if (only < 0 || only > static_cast<int>(kCriteria.size())) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  int failed = 0;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    Line line{false, ""};
    try {
      line = kCriteria[i].second();
    } catch (const std::exception& e) {
      line = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s criterion %zu: %s: %s\n", line.pass ? "PASS" : "FAIL", i + 1, kCriteria[i].first.c_str(),
                line.detail.c_str());
    std::fflush(stdout);
    if (!line.pass) ++failed;
  }
  return failed ? 1 : 0;
}
