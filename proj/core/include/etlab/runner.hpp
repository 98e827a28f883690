#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etlab/catalog.hpp"
#include "etlab/report.hpp"

namespace etlab {

/// The suites a run can select, in report order.
const std::vector<std::string>& suite_names();

/// A structure given directly in the config instead of by catalog name.
struct InlineStructureSpec {
  std::vector<std::string> coords;
  std::vector<std::vector<std::string>> metric;  // full matrix of expressions
  std::string f;
  std::string h = "0";
  std::string case_tag = "generic";
  std::vector<std::pair<double, double>> domain;
  std::optional<std::string> density;
  std::optional<std::string> pressure;
  bool solution = true;
};

struct RunConfig {
  std::string catalog_name;
  CatalogParams params;
  std::optional<InlineStructureSpec> inline_structure;

  std::vector<std::string> suites;  // empty means all
  int samples = 20;
  std::uint64_t seed = 0;
  int jet_order = 6;
  int algebra_trials = 1000;
  int level_set_points = 12;
  unsigned threads = 0;
  /// Overrides keyed by "suite" or "suite.identity".
  std::map<std::string, double> tolerances;
  std::string report_format = "text";
  StructureOptions structure_options;
};

/// Parses a JSON run configuration. Syntax errors throw ParseError with the
/// line and column; unknown keys, suites or bad values throw ConfigError.
RunConfig parse_run_config(const std::string& text);

/// Builds the structure named or described by the config.
CatalogStructure build_structure(const RunConfig& config);

/// Runs the selected suites. Sample points are drawn from the chart's box
/// with per-point seeds, so the report does not depend on the thread count.
/// Domain violations and exhausted jet orders propagate as exceptions.
ResidualReport run(const RunConfig& config);

/// Jet order a suite needs.
int required_jet_order(const std::string& suite);

std::string list_catalog_text();
std::string list_catalog_json();

/// Curvature blocks and the residual table of a structure at one point.
std::string describe(const CatalogStructure& s, const std::vector<double>& point,
                     bool json = false, int jet_order = 6);

/// 0 pass, 1 identity failure, 2 configuration error, 3 numeric or domain
/// error.
int exit_code_for_exception(const std::exception& e);

}  // namespace etlab
