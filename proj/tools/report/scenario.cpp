#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "chernlab/error.hpp"
#include "chernlab/expression.hpp"

namespace chernlab::report {

namespace {

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::SchemaError, where + ": " + what);
}

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) schema_fail(where, "expected an object");
}

// Strict key check: everything present must be allowed, everything required
// must be present.
void expect_keys(const json& j, const std::string& where, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional) {
  expect_object(j, where);
  std::set<std::string> allowed;
  for (const char* k : required) allowed.insert(k);
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) schema_fail(where, "unknown key '" + k + "'");
  }
  for (const char* k : required) {
    if (!j.contains(k)) schema_fail(where, std::string("missing required key '") + k + "'");
  }
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_fail(where, "number is not finite");
  return v;
}

long get_integer(const json& j, const std::string& where, long lo, long hi) {
  if (!j.is_number_integer() && !(j.is_number() && j.get<double>() == std::floor(j.get<double>()))) {
    schema_fail(where, "expected an integer");
  }
  const long v = j.is_number_unsigned() ? static_cast<long>(j.get<std::uint64_t>()) : j.get<long>();
  if (v < lo || v > hi) schema_fail(where, "integer out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

std::uint64_t get_seed(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    schema_fail(where, "seed must be a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) schema_fail(where, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) schema_fail(where, "expected a boolean");
  return j.get<bool>();
}

std::vector<double> get_numbers(const json& j, const std::string& where) {
  if (!j.is_array()) schema_fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], where + "/" + std::to_string(i)));
  return out;
}

json domain_json(const Domain& d) {
  json j;
  switch (d.kind) {
    case Domain::Kind::Unbounded: j["kind"] = "unbounded"; break;
    case Domain::Kind::Ball: j["kind"] = "ball"; break;
    case Domain::Kind::Box: j["kind"] = "box"; break;
    case Domain::Kind::Polydisk: j["kind"] = "polydisk"; break;
    case Domain::Kind::Annulus: j["kind"] = "annulus"; break;
  }
  if (d.kind != Domain::Kind::Unbounded) j["radius"] = d.radius;
  if (d.kind == Domain::Kind::Annulus) j["inner"] = d.inner_radius;
  if (d.center.size() > 0) {
    json c = json::array();
    for (int i = 0; i < d.center.size(); ++i) {
      c.push_back(d.center(i).real());
      c.push_back(d.center(i).imag());
    }
    j["center"] = c;
  }
  return j;
}

Domain parse_domain(const json& j, const std::string& where) {
  expect_keys(j, where, {"kind"}, {"radius", "inner", "center"});
  const std::string kind = get_string(j["kind"], where + "/kind");
  auto radius = [&]() {
    if (!j.contains("radius")) schema_fail(where, "domain '" + kind + "' needs a radius");
    const double r = get_number(j["radius"], where + "/radius");
    if (!(r > 0)) schema_fail(where + "/radius", "must be positive");
    return r;
  };
  ComplexVector center;
  if (j.contains("center")) {
    const auto c = get_numbers(j["center"], where + "/center");
    if (c.size() % 2) schema_fail(where + "/center", "needs re, im pairs");
    center.resize(static_cast<Eigen::Index>(c.size() / 2));
    for (std::size_t i = 0; i < c.size() / 2; ++i) center(static_cast<Eigen::Index>(i)) = Complex(c[2 * i], c[2 * i + 1]);
  }
  if (kind == "unbounded") return Domain::unbounded();
  if (kind == "ball") return Domain::ball(radius(), center);
  if (kind == "box") return Domain::box(radius(), center);
  if (kind == "polydisk") return Domain::polydisk(radius());
  if (kind == "annulus") {
    if (!j.contains("inner")) schema_fail(where, "annulus needs inner");
    return Domain::annulus(get_number(j["inner"], where + "/inner"), radius());
  }
  schema_fail(where + "/kind", "unknown domain kind '" + kind + "'");
}

// Builds the metric and returns its normalized definition.
json parse_metric(const json& j, const std::string& where, ChartedHermitianMetric& out) {
  expect_object(j, where);
  json norm;
  double scale = 1.0;
  if (j.contains("scale")) {
    scale = get_number(j["scale"], where + "/scale");
    if (!(scale > 0)) schema_fail(where + "/scale", "must be positive");
  }
  if (j.contains("catalog")) {
    expect_keys(j, where, {"catalog"}, {"params", "scale"});
    const std::string name = get_string(j["catalog"], where + "/catalog");
    const std::vector<double> params = j.contains("params") ? get_numbers(j["params"], where + "/params") : std::vector<double>{};
    try {
      out = catalog_metric(name, params);
    } catch (const Error& e) {
      schema_fail(where, e.what());
    }
    norm["catalog"] = name;
    norm["params"] = params;
  } else if (j.contains("expression")) {
    expect_keys(j, where, {"expression", "dim"}, {"domain", "scale"});
    const std::string src = get_string(j["expression"], where + "/expression");
    const int n = static_cast<int>(get_integer(j["dim"], where + "/dim", 1, 16));
    const Domain dom = j.contains("domain") ? parse_domain(j["domain"], where + "/domain") : Domain::ball(1.0);
    out = parse_metric_expression(src, n, dom);
    norm["expression"] = src;
    norm["dim"] = n;
    norm["domain"] = domain_json(dom);
  } else {
    schema_fail(where, "metric needs 'catalog' or 'expression'");
  }
  if (scale != 1.0) out = out.scaled(scale);
  norm["scale"] = scale;
  return norm;
}

json parse_map(const json& j, const std::string& where, HolomorphicMapModel& out) {
  expect_object(j, where);
  json norm;
  if (j.contains("catalog")) {
    expect_keys(j, where, {"catalog"}, {"params"});
    const std::string name = get_string(j["catalog"], where + "/catalog");
    const std::vector<double> params = j.contains("params") ? get_numbers(j["params"], where + "/params") : std::vector<double>{};
    try {
      out = catalog_map(name, params);
    } catch (const Error& e) {
      schema_fail(where, e.what());
    }
    norm["catalog"] = name;
    norm["params"] = params;
  } else if (j.contains("product")) {
    expect_keys(j, where, {"product"}, {});
    if (!j["product"].is_array() || j["product"].empty()) schema_fail(where + "/product", "expected a nonempty array");
    std::vector<HolomorphicMapModel> factors;
    json fac = json::array();
    for (std::size_t i = 0; i < j["product"].size(); ++i) {
      HolomorphicMapModel f;
      fac.push_back(parse_map(j["product"][i], where + "/product/" + std::to_string(i), f));
      factors.push_back(f);
    }
    out = product_map(factors);
    norm["product"] = fac;
  } else if (j.contains("components")) {
    expect_keys(j, where, {"components", "dim"}, {"domain"});
    if (!j["components"].is_array()) schema_fail(where + "/components", "expected an array of strings");
    std::vector<std::string> comps;
    for (std::size_t i = 0; i < j["components"].size(); ++i) {
      comps.push_back(get_string(j["components"][i], where + "/components/" + std::to_string(i)));
    }
    const int n = static_cast<int>(get_integer(j["dim"], where + "/dim", 1, 16));
    const Domain dom = j.contains("domain") ? parse_domain(j["domain"], where + "/domain") : Domain::unbounded();
    out = expression_map(comps, n, dom);
    norm["components"] = comps;
    norm["dim"] = n;
    norm["domain"] = domain_json(dom);
  } else {
    schema_fail(where, "map needs 'catalog', 'product' or 'components'");
  }
  return norm;
}

json parse_points(const json& j, const std::string& where, int n) {
  if (!j.is_array() || j.empty()) schema_fail(where, "expected a nonempty array of points");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = get_numbers(j[i], where + "/" + std::to_string(i));
    if (static_cast<int>(p.size()) != 2 * n) {
      schema_fail(where + "/" + std::to_string(i), "a point needs " + std::to_string(2 * n) + " reals (re, im pairs)");
    }
  }
  return j;
}

const ChartedHermitianMetric& metric_ref(const Scenario& s, const json& j, const std::string& where) {
  const std::string name = get_string(j, where);
  const auto it = s.metrics.find(name);
  if (it == s.metrics.end()) schema_fail(where, "undefined metric '" + name + "'");
  return it->second;
}

const HolomorphicMapModel& map_ref(const Scenario& s, const json& j, const std::string& where) {
  const std::string name = get_string(j, where);
  const auto it = s.maps.find(name);
  if (it == s.maps.end()) schema_fail(where, "undefined map '" + name + "'");
  return it->second;
}

json parse_frames(const json* j, const std::string& where) {
  FrameSearchConfig d;
  json out{{"n_starts", d.n_starts}, {"max_iter", d.max_iter}, {"step_tol", d.step_tol}};
  if (!j) return out;
  expect_keys(*j, where, {}, {"n_starts", "max_iter", "step_tol"});
  if (j->contains("n_starts")) out["n_starts"] = get_integer((*j)["n_starts"], where + "/n_starts", 1, 10000);
  if (j->contains("max_iter")) out["max_iter"] = get_integer((*j)["max_iter"], where + "/max_iter", 1, 1000000);
  if (j->contains("step_tol")) {
    const double t = get_number((*j)["step_tol"], where + "/step_tol");
    if (!(t > 0)) schema_fail(where + "/step_tol", "must be positive");
    out["step_tol"] = t;
  }
  return out;
}

json parse_sbc_options(const json* j, const std::string& where) {
  SbcOptions d;
  json out{{"box", d.box}, {"n_starts", d.n_starts}, {"max_iter", d.max_iter}};
  if (!j) return out;
  expect_keys(*j, where, {}, {"box", "n_starts", "max_iter"});
  if (j->contains("box")) {
    const double b = get_number((*j)["box"], where + "/box");
    if (!(b > 0 && b <= 50)) schema_fail(where + "/box", "must be in (0, 50]");
    out["box"] = b;
  }
  if (j->contains("n_starts")) out["n_starts"] = get_integer((*j)["n_starts"], where + "/n_starts", 0, 10000);
  if (j->contains("max_iter")) out["max_iter"] = get_integer((*j)["max_iter"], where + "/max_iter", 1, 1000000);
  return out;
}

const json* opt_key(const json& j, const char* k) { return j.contains(k) ? &j[k] : nullptr; }

json parse_task(const Scenario& s, const json& t, const std::string& where, std::uint64_t default_seed,
                const Overrides& ov) {
  expect_object(t, where);
  if (!t.contains("kind")) schema_fail(where, "missing required key 'kind'");
  const std::string kind = get_string(t["kind"], where + "/kind");
  json out;
  out["kind"] = kind;
  out["seed"] = t.contains("seed") ? get_seed(t["seed"], where + "/seed") : default_seed;
  if (t.contains("name")) out["name"] = get_string(t["name"], where + "/name");

  if (kind == "curvature" || kind == "rbc" || kind == "sbc") {
    if (kind == "curvature") {
      expect_keys(t, where, {"kind", "metric", "points"}, {"name", "seed", "vectors", "step", "symmetry_tol"});
    } else if (kind == "rbc") {
      expect_keys(t, where, {"kind", "metric", "points"}, {"name", "seed", "frames"});
    } else {
      expect_keys(t, where, {"kind", "metric", "points"}, {"name", "seed", "frames", "sbc"});
    }
    const ChartedHermitianMetric& m = metric_ref(s, t["metric"], where + "/metric");
    out["metric"] = t["metric"];
    out["points"] = parse_points(t["points"], where + "/points", m.dim());
    if (kind == "curvature") {
      if (t.contains("vectors")) out["vectors"] = parse_points(t["vectors"], where + "/vectors", m.dim());
      if (t.contains("step")) {
        const double h = get_number(t["step"], where + "/step");
        if (!(h > 0)) schema_fail(where + "/step", "must be positive");
        out["step"] = h;
      }
      out["symmetry_tol"] = t.contains("symmetry_tol") ? get_number(t["symmetry_tol"], where + "/symmetry_tol") : 1e-6;
    } else {
      out["frames"] = parse_frames(opt_key(t, "frames"), where + "/frames");
      if (kind == "sbc") out["sbc"] = parse_sbc_options(opt_key(t, "sbc"), where + "/sbc");
    }
    return out;
  }

  if (kind == "schwarz") {
    expect_keys(t, where, {"kind", "theorem", "source", "target"},
                {"name", "seed", "preset", "mu", "map", "grid", "points", "constants", "kappa_mode", "tol",
                 "form_tol", "frames", "sbc", "csv"});
    const std::string th = get_string(t["theorem"], where + "/theorem");
    Theorem theorem;
    try {
      theorem = parse_theorem(th);
    } catch (const Error& e) {
      schema_fail(where + "/theorem", e.what());
    }
    out["theorem"] = th;
    const std::string preset = t.contains("preset") ? get_string(t["preset"], where + "/preset") : "none";
    try {
      (void)parse_preset(preset);
    } catch (const Error& e) {
      schema_fail(where + "/preset", e.what());
    }
    out["preset"] = preset;
    const ChartedHermitianMetric& src = metric_ref(s, t["source"], where + "/source");
    (void)metric_ref(s, t["target"], where + "/target");
    out["source"] = t["source"];
    out["target"] = t["target"];
    if (t.contains("mu")) {
      (void)metric_ref(s, t["mu"], where + "/mu");
      out["mu"] = t["mu"];
    } else if (theorem == Theorem::Family) {
      schema_fail(where, "the family theorem needs 'mu'");
    }
    if (t.contains("map")) {
      (void)map_ref(s, t["map"], where + "/map");
      out["map"] = t["map"];
    } else if (theorem != Theorem::TraceBound) {
      schema_fail(where, "missing required key 'map'");
    }
    if (ov.grid) {
      try {
        out["grid"] = GridSpec::parse(*ov.grid).to_string();
      } catch (const Error& e) {
        schema_fail("--grid", e.what());
      }
    } else if (t.contains("grid")) {
      if (t.contains("points")) schema_fail(where, "give either 'grid' or 'points', not both");
      try {
        out["grid"] = GridSpec::parse(get_string(t["grid"], where + "/grid")).to_string();
      } catch (const Error& e) {
        schema_fail(where + "/grid", e.what());
      }
    } else if (t.contains("points")) {
      out["points"] = parse_points(t["points"], where + "/points", src.dim());
    } else {
      schema_fail(where, "needs 'grid' or 'points'");
    }
    if (out.contains("grid")) {
      try {
        (void)GridSpec::parse(out["grid"].get<std::string>()).points(src.dim());
      } catch (const Error& e) {
        schema_fail(where + "/grid", e.what());
      }
    }
    json consts = json::object();
    if (t.contains("constants")) {
      expect_keys(t["constants"], where + "/constants", {}, {"C1", "C2", "C3", "C4", "kappa", "kappa1", "kappa2"});
      for (const auto& [k, v] : t["constants"].items()) consts[k] = get_number(v, where + "/constants/" + k);
    }
    out["constants"] = consts;
    const std::string km = t.contains("kappa_mode") ? get_string(t["kappa_mode"], where + "/kappa_mode") : "full_cone";
    try {
      (void)parse_kappa_mode(km);
    } catch (const Error& e) {
      schema_fail(where + "/kappa_mode", e.what());
    }
    out["kappa_mode"] = km;
    SchwarzOptions d;
    out["tol"] = ov.tol ? *ov.tol : (t.contains("tol") ? get_number(t["tol"], where + "/tol") : d.tol);
    out["form_tol"] = t.contains("form_tol") ? get_number(t["form_tol"], where + "/form_tol") : d.form_tol;
    out["frames"] = parse_frames(opt_key(t, "frames"), where + "/frames");
    out["sbc"] = parse_sbc_options(opt_key(t, "sbc"), where + "/sbc");
    if (t.contains("csv")) out["csv"] = get_string(t["csv"], where + "/csv");
    return out;
  }

  if (kind == "identity") {
    if (!t.contains("check")) schema_fail(where, "missing required key 'check'");
    const std::string check = get_string(t["check"], where + "/check");
    out["check"] = check;
    if (check == "fs-moment") {
      expect_keys(t, where, {"kind", "check", "n", "indices"}, {"name", "seed", "samples"});
      const int n = static_cast<int>(get_integer(t["n"], where + "/n", 1, 64));
      const auto idx = get_numbers(t["indices"], where + "/indices");
      if (idx.size() != 4) schema_fail(where + "/indices", "needs four 1-based indices");
      for (double i : idx)
        if (i != std::floor(i) || i < 1 || i > n) schema_fail(where + "/indices", "indices must be integers in [1, n]");
      out["n"] = n;
      out["indices"] = t["indices"];
      out["samples"] = t.contains("samples") ? get_integer(t["samples"], where + "/samples", 10000, 100000000) : 1000000;
    } else if (check == "theorem23") {
      expect_keys(t, where, {"kind", "check", "n"}, {"name", "seed", "trials", "tol", "zero_diagonal"});
      out["n"] = get_integer(t["n"], where + "/n", 2, 16);
      out["trials"] = t.contains("trials") ? get_integer(t["trials"], where + "/trials", 1, 100000) : 100;
      out["tol"] = t.contains("tol") ? get_number(t["tol"], where + "/tol") : 1e-10;
      out["zero_diagonal"] = t.contains("zero_diagonal") ? get_bool(t["zero_diagonal"], where + "/zero_diagonal") : false;
    } else if (check == "averaged-hsc") {
      expect_keys(t, where, {"kind", "check", "metric", "point", "b"}, {"name", "seed", "samples"});
      const ChartedHermitianMetric& m = metric_ref(s, t["metric"], where + "/metric");
      out["metric"] = t["metric"];
      out["point"] = parse_points(json::array({t["point"]}), where + "/point", m.dim())[0];
      const auto b = get_numbers(t["b"], where + "/b");
      if (static_cast<int>(b.size()) != m.dim()) schema_fail(where + "/b", "needs one weight per dimension");
      for (double x : b)
        if (x < 0) schema_fail(where + "/b", "weights must be nonnegative");
      out["b"] = b;
      out["samples"] = t.contains("samples") ? get_integer(t["samples"], where + "/samples", 10000, 100000000) : 1000000;
    } else {
      schema_fail(where + "/check", "unknown identity check '" + check + "'");
    }
    return out;
  }
  schema_fail(where + "/kind", "unknown task kind '" + kind + "'");
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, path + ": " + e.what());
  }
}

Scenario parse_scenario(const json& doc, const Overrides& ov) {
  expect_keys(doc, "/", {"schema_version", "tasks"}, {"seed", "metrics", "maps", "description"});
  const long version = get_integer(doc["schema_version"], "/schema_version", 0, 1000);
  if (version != kSchemaVersion) schema_fail("/schema_version", "unsupported version " + std::to_string(version));
  Scenario s;
  json& norm = s.normalized;
  norm["schema_version"] = kSchemaVersion;
  const std::uint64_t seed = ov.seed ? *ov.seed : (doc.contains("seed") ? get_seed(doc["seed"], "/seed") : 0);
  norm["seed"] = seed;
  if (doc.contains("description")) norm["description"] = get_string(doc["description"], "/description");

  norm["metrics"] = json::object();
  if (doc.contains("metrics")) {
    expect_object(doc["metrics"], "/metrics");
    for (const auto& [name, def] : doc["metrics"].items()) {
      ChartedHermitianMetric m;
      const std::string where = "/metrics/" + name;
      try {
        norm["metrics"][name] = parse_metric(def, where, m);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::SchemaError) throw;
        schema_fail(where, e.what());
      }
      s.metrics.emplace(name, m);
    }
  }
  norm["maps"] = json::object();
  if (doc.contains("maps")) {
    expect_object(doc["maps"], "/maps");
    for (const auto& [name, def] : doc["maps"].items()) {
      HolomorphicMapModel f;
      const std::string where = "/maps/" + name;
      try {
        norm["maps"][name] = parse_map(def, where, f);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::SchemaError) throw;
        schema_fail(where, e.what());
      }
      s.maps.emplace(name, f);
    }
  }
  if (!doc["tasks"].is_array()) schema_fail("/tasks", "expected an array");
  norm["tasks"] = json::array();
  for (std::size_t i = 0; i < doc["tasks"].size(); ++i) {
    // Tasks without their own seed get seed + index, written back explicitly.
    norm["tasks"].push_back(parse_task(s, doc["tasks"][i], "/tasks/" + std::to_string(i), seed + i, ov));
  }
  return s;
}

}  // namespace chernlab::report
