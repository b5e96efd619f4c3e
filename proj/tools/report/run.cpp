#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "scenario.hpp"

#include "chernlab/cone.hpp"
#include "chernlab/curvature.hpp"
#include "chernlab/error.hpp"
#include "chernlab/holomap.hpp"

namespace chernlab::report {

namespace {

// Records beyond this many grid points are left to the CSV output.
constexpr std::size_t kMaxInlineRecords = 10000;

// The divergence certificate counts as verified when the objective drops
// below this at t = 20.
constexpr double kCertificateT = 20.0;
constexpr double kCertificateLevel = -1e6;

ComplexVector to_point(const json& flat) {
  const auto x = flat.get<std::vector<double>>();
  ComplexVector z(static_cast<Eigen::Index>(x.size() / 2));
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = Complex(x[2 * i], x[2 * i + 1]);
  return z;
}

json point_json(const ComplexVector& z) {
  json out = json::array();
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    out.push_back(z(i).real());
    out.push_back(z(i).imag());
  }
  return out;
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json matrix_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

json real_matrix_json(const RealMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

json real_vector_json(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::vector<ComplexVector> points_of(const json& t, int n) {
  if (t.contains("grid")) return GridSpec::parse(t["grid"].get<std::string>()).points(n);
  std::vector<ComplexVector> pts;
  for (const auto& p : t["points"]) pts.push_back(to_point(p));
  return pts;
}

FrameSearchConfig frames_of(const json& t) {
  FrameSearchConfig c;
  c.n_starts = t["frames"]["n_starts"].get<int>();
  c.max_iter = t["frames"]["max_iter"].get<int>();
  c.step_tol = t["frames"]["step_tol"].get<double>();
  c.seed = t["seed"].get<std::uint64_t>();
  return c;
}

SbcOptions sbc_of(const json& t) {
  SbcOptions o;
  o.box = t["sbc"]["box"].get<double>();
  o.n_starts = t["sbc"]["n_starts"].get<int>();
  o.max_iter = t["sbc"]["max_iter"].get<int>();
  o.seed = t["seed"].get<std::uint64_t>();
  return o;
}

std::string kahler_flag_name(KahlerFlag k) {
  switch (k) {
    case KahlerFlag::Yes: return "yes";
    case KahlerFlag::No: return "no";
    case KahlerFlag::Unknown: break;
  }
  return "unknown";
}

struct TaskOutcome {
  json entry;
  std::optional<CsvOutput> csv;
};

json run_curvature(const Scenario& s, const json& t) {
  const ChartedHermitianMetric& m = s.metrics.at(t["metric"].get<std::string>());
  const int n = m.dim();
  std::optional<double> step;
  if (t.contains("step")) step = t["step"].get<double>();
  json pts = json::array();
  for (const auto& pj : t["points"]) {
    const ComplexVector z = to_point(pj);
    const CurvatureReport r = curvature_report(m, z, t["symmetry_tol"].get<double>(), step);
    json R = json::array();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) R.push_back(complex_json(r.R(i, j, k, l)));
    json p{{"z", point_json(z)},
           {"g", matrix_json(r.g.matrix())},
           {"R", R},
           {"ric1", matrix_json(r.ric1.matrix())},
           {"ric2", matrix_json(r.ric2.matrix())},
           {"ric3", matrix_json(r.ric3.matrix())},
           {"scal", r.scal},
           {"scal_tilde", r.scal_tilde},
           {"kahler_symmetry", {{"holds", r.kahler.holds}, {"residue", r.kahler.residue}}},
           {"error_estimate", r.error_estimate},
           {"step", r.step}};
    if (t.contains("vectors")) {
      json h = json::array();
      for (const auto& vj : t["vectors"]) h.push_back(hsc(r.R, r.g, to_point(vj)));
      p["hsc"] = h;
    }
    pts.push_back(p);
  }
  return json{{"dim", n},
              {"label", m.label()},
              {"kahler_flag", kahler_flag_name(m.kahler_flag())},
              {"R_layout", "flat over (i, jbar, k, lbar), last index fastest"},
              {"points", pts}};
}

json run_rbc(const Scenario& s, const json& t) {
  const ChartedHermitianMetric& m = s.metrics.at(t["metric"].get<std::string>());
  const FrameSearchConfig cfg = frames_of(t);
  json pts = json::array();
  for (const auto& pj : t["points"]) {
    const ComplexVector z = to_point(pj);
    const RbcBounds b = rbc_bounds(chern_curvature(m, z), m(z), cfg);
    pts.push_back(json{{"z", point_json(z)},
                       {"inf", b.inf},
                       {"sup", b.sup},
                       {"argmin", real_vector_json(b.at_inf.argmin)},
                       {"argmax", real_vector_json(b.at_sup.argmax)},
                       {"method", to_string(b.at_inf.method)},
                       {"heuristic", b.heuristic},
                       {"warnings", b.warnings}});
  }
  return json{{"dim", m.dim()}, {"label", m.label()}, {"points", pts}};
}

json run_sbc(const Scenario& s, const json& t) {
  const ChartedHermitianMetric& m = s.metrics.at(t["metric"].get<std::string>());
  const FrameSearchConfig cfg = frames_of(t);
  const SbcOptions opt = sbc_of(t);
  json pts = json::array();
  for (const auto& pj : t["points"]) {
    const ComplexVector z = to_point(pj);
    const ChernCurvatureTensor R = chern_curvature(m, z);
    const SbcFrameResult res = sbc_bound(R, m(z), cfg, opt);
    const SbcResult& b = res.best;
    json p{{"z", point_json(z)},
           {"status", to_string(b.status)},
           {"margin", b.margin},
           {"marginal", b.marginal},
           {"heuristic", res.heuristic},
           {"warnings", res.warnings}};
    if (b.status == SbcResult::Status::Finite) {
      p["inf"] = b.inf_val;
      p["arg"] = real_vector_json(b.arg);
    } else {
      const RealMatrix M = curvature_in_frame(R, res.frame).R_mat;
      const double v0 = sbc_certificate_value(M, b, 0.0);
      const double vt = sbc_certificate_value(M, b, kCertificateT);
      p["certificate"] = json{{"gap_index", b.gap_index},
                              {"base", real_vector_json(b.base)},
                              {"frame_matrix", real_matrix_json(M)},
                              {"value_t0", v0},
                              {"value_t20", vt},
                              {"verified", vt < kCertificateLevel && vt < v0}};
    }
    pts.push_back(p);
  }
  return json{{"dim", m.dim()}, {"label", m.label()}, {"points", pts}};
}

json constants_json(const HypothesisConstants& c) {
  json vals = json::object();
  for (const auto& [name, k] : c.values) {
    json e{{"value", k.value}, {"provenance", to_string(k.provenance)}, {"heuristic", k.heuristic}};
    if (k.achieved_at) e["achieved_at"] = point_json(*k.achieved_at);
    vals[name] = e;
  }
  return json{{"n", c.n}, {"r", c.r}, {"values", vals}};
}

json verdict_json(const SchwarzVerdict& v) {
  json checks = json::array();
  for (const auto& h : v.hypothesis_checks) {
    checks.push_back(json{{"name", h.name}, {"holds", h.holds}, {"worst", h.worst}, {"worst_point", point_json(h.worst_point)}});
  }
  json out{{"theorem", to_string(v.theorem)},
           {"preset", to_string(v.preset)},
           {"pass", v.pass},
           {"bound", v.bound},
           {"sup_energy", v.sup_energy},
           {"sup_point", point_json(v.sup_point)},
           {"worst_margin", v.worst_margin},
           {"worst_point", point_json(v.worst_point)},
           {"hypotheses_hold", v.hypotheses_hold},
           {"hypothesis_checks", checks},
           {"constants", constants_json(v.constants)},
           {"flags", v.flags},
           {"notes", v.notes},
           {"n_points", v.records.size()}};
  if (v.proof_bound) out["proof_bound"] = *v.proof_bound;
  if (v.records.size() <= kMaxInlineRecords) {
    json recs = json::array();
    for (const auto& r : v.records) {
      json e{{"z", point_json(r.z)}, {"energy", r.energy}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}};
      if (r.proof_margin) e["proof_margin"] = *r.proof_margin;
      recs.push_back(e);
    }
    out["records"] = recs;
  }
  return out;
}

TaskOutcome run_schwarz(const Scenario& s, const json& t) {
  SchwarzProblem p;
  p.theorem = parse_theorem(t["theorem"].get<std::string>());
  p.preset = parse_preset(t["preset"].get<std::string>());
  p.omega = s.metrics.at(t["source"].get<std::string>());
  p.eta = s.metrics.at(t["target"].get<std::string>());
  if (t.contains("mu")) p.mu = s.metrics.at(t["mu"].get<std::string>());
  if (t.contains("map")) p.f = s.maps.at(t["map"].get<std::string>());
  p.grid = points_of(t, p.omega.dim());
  SchwarzOptions opt;
  for (const auto& [k, v] : t["constants"].items()) opt.user_constants[k] = v.get<double>();
  opt.kappa_mode = parse_kappa_mode(t["kappa_mode"].get<std::string>());
  opt.frames = frames_of(t);
  opt.sbc = sbc_of(t);
  opt.tol = t["tol"].get<double>();
  opt.form_tol = t["form_tol"].get<double>();
  const SchwarzVerdict v = verify_schwarz(p, opt);
  TaskOutcome out;
  out.entry["verdict"] = v.pass ? "pass" : "fail";
  out.entry["result"] = verdict_json(v);
  if (t.contains("csv")) {
    std::ostringstream os;
    emit_grid_csv(v, p.omega.dim(), os);
    out.csv = CsvOutput{t["csv"].get<std::string>(), os.str()};
    out.entry["result"]["csv"] = t["csv"];
  }
  return out;
}

TaskOutcome run_identity(const Scenario& s, const json& t) {
  const std::string check = t["check"].get<std::string>();
  const std::uint64_t seed = t["seed"].get<std::uint64_t>();
  TaskOutcome out;
  bool ok = false;
  if (check == "fs-moment") {
    std::array<int, 4> idx{};
    for (int a = 0; a < 4; ++a) idx[a] = static_cast<int>(t["indices"][a].get<double>()) - 1;
    const MomentResult r = fs_moment_check(t["n"].get<int>(), idx, t["samples"].get<long>(), seed);
    out.entry["result"] = json{{"estimate", complex_json(r.estimate)},
                               {"target", r.target},
                               {"abs_err", r.abs_err},
                               {"std_error", r.std_error},
                               {"within_3_sigma", r.within_3_sigma}};
    ok = r.within_3_sigma;
  } else if (check == "theorem23") {
    const Theorem23Result r = theorem23_check(t["n"].get<int>(), t["trials"].get<int>(), seed,
                                              t["tol"].get<double>(), t["zero_diagonal"].get<bool>());
    out.entry["result"] = json{{"literal_discrepancy", r.literal_discrepancy},
                               {"sigma_discrepancy", r.sigma_discrepancy},
                               {"multiple_discrepancy", r.multiple_discrepancy},
                               {"rbc_discrepancy", r.rbc_discrepancy},
                               {"literal_holds", r.literal_holds},
                               {"multiple_holds", r.multiple_holds}};
    ok = r.literal_holds;
  } else {
    const ChartedHermitianMetric& m = s.metrics.at(t["metric"].get<std::string>());
    const ComplexVector z = to_point(t["point"]);
    const HermitianForm g = m(z);
    const ChernCurvatureTensor Rf = tensor_in_frame(chern_curvature(m, z), gram_unitary_frame(g));
    const auto bv = t["b"].get<std::vector<double>>();
    const RealVector b = Eigen::Map<const RealVector>(bv.data(), static_cast<Eigen::Index>(bv.size()));
    const AveragedHscResult r = averaged_hsc_check(Rf, b, t["samples"].get<long>(), seed);
    out.entry["result"] = json{{"lhs", r.lhs},
                               {"rhs", r.rhs},
                               {"rhs_doubled", r.rhs_doubled},
                               {"abs_err", r.abs_err},
                               {"std_error", r.std_error},
                               {"within_3_sigma", r.within_3_sigma}};
    ok = r.within_3_sigma;
  }
  out.entry["verdict"] = ok ? "pass" : "fail";
  return out;
}

TaskOutcome run_task(const Scenario& s, const json& t, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  TaskOutcome out;
  try {
    const std::string kind = t["kind"].get<std::string>();
    if (kind == "curvature") {
      out.entry["result"] = run_curvature(s, t);
    } else if (kind == "rbc") {
      out.entry["result"] = run_rbc(s, t);
    } else if (kind == "sbc") {
      out.entry["result"] = run_sbc(s, t);
    } else if (kind == "schwarz") {
      out = run_schwarz(s, t);
    } else {
      out = run_identity(s, t);
    }
    out.entry["status"] = "ok";
  } catch (const Error& e) {
    out = TaskOutcome{};
    out.entry["status"] = "error";
    out.entry["error"] = json{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  } catch (const std::exception& e) {
    out = TaskOutcome{};
    out.entry["status"] = "error";
    out.entry["error"] = json{{"kind", "InternalError"}, {"message", e.what()}};
  }
  out.entry["kind"] = t["kind"];
  if (t.contains("name")) out.entry["name"] = t["name"];
  if (timing) {
    out.entry["elapsed_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return out;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& opt) {
  const json& tasks = s.normalized["tasks"];
  std::vector<TaskOutcome> outcomes(tasks.size());
  if (opt.parallel) {
    std::vector<std::future<TaskOutcome>> futs;
    for (const auto& t : tasks) {
      futs.push_back(std::async(std::launch::async, [&s, &t, &opt] { return run_task(s, t, opt.timing); }));
    }
    for (std::size_t i = 0; i < futs.size(); ++i) outcomes[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < tasks.size(); ++i) outcomes[i] = run_task(s, tasks[i], opt.timing);
  }

  RunResult res;
  json list = json::array();
  int errors = 0, passed = 0, failed = 0;
  for (auto& o : outcomes) {
    if (o.entry["status"] == "error") ++errors;
    if (o.entry.contains("verdict")) (o.entry["verdict"] == "pass" ? passed : failed)++;
    if (o.csv) res.csv.push_back(*o.csv);
    list.push_back(std::move(o.entry));
  }
  res.report = json{{"format_version", kReportFormatVersion},
                    {"effective_config", s.normalized},
                    {"tasks", list},
                    {"summary", {{"tasks", tasks.size()}, {"errors", errors}, {"passed", passed}, {"failed", failed}}}};
  res.exit_status = (errors > 0 || failed > 0) ? 1 : 0;
  return res;
}

void emit_grid_csv(const SchwarzVerdict& v, int n, std::ostream& out) {
  for (int i = 1; i <= n; ++i) {
    if (i > 1) out << ',';
    out << "re(z_" << i << "),im(z_" << i << ")";
  }
  out << ",energy,lhs,rhs,margin\n";
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf;
  };
  for (const auto& r : v.records) {
    for (int i = 0; i < n; ++i) {
      if (i > 0) out << ',';
      put(r.z(i).real());
      out << ',';
      put(r.z(i).imag());
    }
    for (double x : {r.energy, r.lhs, r.rhs, r.margin}) {
      out << ',';
      put(x);
    }
    out << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  f << content;
  if (!f) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

}  // namespace chernlab::report
