#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "report/scenario.hpp"

#include "chernlab/error.hpp"
#include "chernlab/holomap.hpp"
#include "chernlab/metric.hpp"

using chernlab::Error;
using chernlab::ErrorKind;
using namespace chernlab::report;

namespace {

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::SchemaError, what + ": '" + item + "' is not a number");
    }
  }
  return out;
}

// "fubini_study:2*3" -> {catalog, params, scale}; "name" alone is fine too.
json inline_catalog(const std::string& spec, bool allow_scale, const std::string& what) {
  std::string body = spec;
  json out;
  if (allow_scale) {
    const auto star = body.find('*');
    if (star != std::string::npos) {
      const auto s = parse_reals(body.substr(star + 1), what);
      if (s.size() != 1) throw Error(ErrorKind::SchemaError, what + ": bad scale in '" + spec + "'");
      out["scale"] = s[0];
      body = body.substr(0, star);
    }
  }
  const auto colon = body.find(':');
  out["catalog"] = body.substr(0, colon);
  out["params"] = colon == std::string::npos ? std::vector<double>{} : parse_reals(body.substr(colon + 1), what);
  return out;
}

json constants_arg(const std::vector<std::string>& items) {
  json out = json::object();
  for (const auto& it : items) {
    const auto eq = it.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::SchemaError, "--constant: expected NAME=VALUE, got '" + it + "'");
    const auto v = parse_reals(it.substr(eq + 1), "--constant");
    if (v.size() != 1) throw Error(ErrorKind::SchemaError, "--constant: bad value in '" + it + "'");
    out[it.substr(0, eq)] = v[0];
  }
  return out;
}

json points_arg(const std::vector<std::string>& items, const std::string& what) {
  json out = json::array();
  for (const auto& it : items) out.push_back(parse_reals(it, what));
  return out;
}

int emit(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chern curvature lab and Schwarz inequality verifier"};
  app.require_subcommand(1);

  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> grid;
  std::optional<double> tol;
  bool parallel = false, timing = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Write the report here instead of stdout");
    sub->add_option("--seed", seed, "Scenario seed");
    sub->add_option("--tol", tol, "Verdict tolerance for Schwarz tasks");
    sub->add_option("--grid", grid, "Grid spec, e.g. box:center=0,0;half=0.4;per-axis=5");
    sub->add_flag("--parallel", parallel, "Run tasks concurrently");
    sub->add_flag("--timing", timing, "Record wall-clock time per task");
  };

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  add_common(run);

  std::string metric_spec;
  std::vector<std::string> points, vectors;
  std::optional<double> step;
  auto* curv = app.add_subcommand("curvature", "Chern curvature, Ricci traces and HSC at points");
  auto* rbc = app.add_subcommand("rbc", "Real bisectional curvature bounds at points");
  auto* sbc = app.add_subcommand("sbc", "Schwarz bisectional curvature infimum at points");
  for (auto* sub : {curv, rbc, sbc}) {
    sub->add_option("--metric", metric_spec, "Catalog metric, name:params*scale")->required();
    sub->add_option("--point", points, "Point as re,im pairs (repeatable)")->required();
    add_common(sub);
  }
  curv->add_option("--vector", vectors, "Direction for HSC (repeatable)");
  curv->add_option("--step", step, "Finite difference step");

  std::string theorem, preset = "none", source, target, mu, map_spec, kappa_mode = "full_cone", csv;
  std::vector<std::string> constants;
  auto* sch = app.add_subcommand("schwarz", "Verify a Schwarz-type estimate on a grid");
  sch->add_option("--theorem", theorem, "chern-lu | aubin-yau | family | trace-bound")->required();
  sch->add_option("--preset", preset, "Family preset");
  sch->add_option("--source", source, "Source metric spec")->required();
  sch->add_option("--target", target, "Target metric spec")->required();
  sch->add_option("--mu", mu, "Auxiliary metric (family theorem)");
  sch->add_option("--map", map_spec, "Catalog map, name:params");
  sch->add_option("--constant", constants, "NAME=VALUE (repeatable)");
  sch->add_option("--kappa-mode", kappa_mode, "full_cone | along_map");
  sch->add_option("--csv", csv, "Write per-point records as CSV");
  add_common(sch);

  std::string check, indices, b_spec;
  std::optional<int> n_opt, trials;
  std::optional<long> samples;
  bool zero_diagonal = false;
  auto* ident = app.add_subcommand("identity", "Monte Carlo and algebraic identity checks");
  ident->add_option("--check", check, "fs-moment | theorem23 | averaged-hsc")->required();
  ident->add_option("--n", n_opt, "Dimension");
  ident->add_option("--indices", indices, "Four 1-based indices i,j,k,l");
  ident->add_option("--samples", samples, "Monte Carlo samples");
  ident->add_option("--trials", trials, "Random tensors (theorem23)");
  ident->add_flag("--zero-diagonal", zero_diagonal, "Zero all-equal-index entries (theorem23)");
  ident->add_option("--metric", metric_spec, "Metric spec (averaged-hsc)");
  ident->add_option("--point", points, "Point (averaged-hsc)");
  ident->add_option("--b", b_spec, "Nonnegative weights (averaged-hsc)");
  add_common(ident);

  auto* cat = app.add_subcommand("catalog", "List catalog metrics and maps");
  cat->add_option("--out", out_path, "Write the listing here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cat->parsed()) {
      return emit(json{{"metrics", chernlab::catalog_metric_names()}, {"maps", chernlab::catalog_map_names()}},
                  out_path);
    }
    json doc;
    if (run->parsed()) {
      doc = load_json_file(scenario_path);
    } else {
      doc = json{{"schema_version", kSchemaVersion}, {"metrics", json::object()}, {"maps", json::object()}};
      json task;
      auto sub = app.get_subcommands().front();
      task["kind"] = sub->get_name();
      if (sub == curv || sub == rbc || sub == sbc) {
        doc["metrics"]["m"] = inline_catalog(metric_spec, true, "--metric");
        task["metric"] = "m";
        task["points"] = points_arg(points, "--point");
        if (sub == curv && !vectors.empty()) task["vectors"] = points_arg(vectors, "--vector");
        if (sub == curv && step) task["step"] = *step;
      } else if (sub == sch) {
        doc["metrics"]["source"] = inline_catalog(source, true, "--source");
        doc["metrics"]["target"] = inline_catalog(target, true, "--target");
        task["theorem"] = theorem;
        task["preset"] = preset;
        task["source"] = "source";
        task["target"] = "target";
        if (!mu.empty()) {
          doc["metrics"]["mu"] = inline_catalog(mu, true, "--mu");
          task["mu"] = "mu";
        }
        if (!map_spec.empty()) {
          doc["maps"]["f"] = inline_catalog(map_spec, false, "--map");
          task["map"] = "f";
        }
        task["grid"] = grid.value_or("box:center=0;half=0.4;per-axis=9");
        task["constants"] = constants_arg(constants);
        task["kappa_mode"] = kappa_mode;
        if (!csv.empty()) task["csv"] = csv;
      } else {
        task["check"] = check;
        if (check == "averaged-hsc") {
          doc["metrics"]["m"] = inline_catalog(metric_spec, true, "--metric");
          task["metric"] = "m";
          if (points.size() != 1) throw Error(ErrorKind::SchemaError, "--point: averaged-hsc needs exactly one point");
          task["point"] = parse_reals(points[0], "--point");
          task["b"] = parse_reals(b_spec, "--b");
        } else {
          if (n_opt) task["n"] = *n_opt;
          if (check == "fs-moment") task["indices"] = parse_reals(indices, "--indices");
          if (trials) task["trials"] = *trials;
          if (zero_diagonal) task["zero_diagonal"] = true;
        }
        if (samples) task["samples"] = *samples;
      }
      doc["tasks"] = json::array({task});
    }
    Overrides ov{seed, grid, tol};
    const Scenario s = parse_scenario(doc, ov);
    const RunResult res = run_scenario(s, RunOptions{parallel, timing});
    for (const auto& c : res.csv) write_text_file(c.path, c.content);
    emit(res.report, out_path);
    return res.exit_status;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
