#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "chernlab/holomap.hpp"
#include "chernlab/metric.hpp"
#include "chernlab/schwarz.hpp"

namespace chernlab::report {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr int kReportFormatVersion = 1;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> grid;
  std::optional<double> tol;
};

struct Scenario {
  json normalized;  // the effective config: every default filled in
  std::map<std::string, ChartedHermitianMetric> metrics;
  std::map<std::string, HolomorphicMapModel> maps;
};

// Throws Error(SchemaError) naming the JSON location on any problem.
Scenario parse_scenario(const json& doc, const Overrides& ov = {});
json load_json_file(const std::string& path);

struct RunOptions {
  bool parallel = false;
  bool timing = false;
};

struct CsvOutput {
  std::string path;
  std::string content;
};

struct RunResult {
  json report;
  int exit_status = 0;
  std::vector<CsvOutput> csv;
};

RunResult run_scenario(const Scenario& s, const RunOptions& opt = {});

// Header re(z_1),im(z_1),...,energy,lhs,rhs,margin; one row per grid point in
// grid order; %.17g; '\n' line ends.
void emit_grid_csv(const SchwarzVerdict& v, int n, std::ostream& out);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace chernlab::report
