// etlab: batch verifier for curvature identities of Einstein-type structures.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "etlab/geometry.hpp"
#include "etlab/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw etlab::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw etlab::ConfigError("bad coordinate '" + item + "' in --point");
    }
  }
  if (out.empty()) throw etlab::ConfigError("--point needs at least one coordinate");
  return out;
}

etlab::CatalogParams parse_params(const std::vector<std::string>& items) {
  etlab::CatalogParams params;
  for (const auto& kv : items) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw etlab::ConfigError("--param expects k=v, got '" + kv + "'");
    try {
      params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw etlab::ConfigError("--param value must be a number: '" + kv + "'");
    }
  }
  return params;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature identity verifier for Einstein-type manifolds", "etlab"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<int> jet_order;
  std::string report_format;
  std::string out_path;
  auto* run_cmd = app.add_subcommand("run", "Run the suites selected by a config file");
  run_cmd->add_option("config", config_path, "JSON run configuration")->required();
  run_cmd->add_option("--seed", seed, "Override the seed");
  run_cmd->add_option("--samples", samples, "Override the number of sample points");
  run_cmd->add_option("--jet-order", jet_order, "Override the jet order");
  run_cmd->add_option("--report", report_format, "Report format")
      ->check(CLI::IsMember({"text", "json"}));
  run_cmd->add_option("--out", out_path, "Write the report to a file");

  bool list_json = false;
  auto* list_cmd = app.add_subcommand("list-catalog", "List the catalog of structures");
  list_cmd->add_flag("--json", list_json, "Structured output");

  std::string describe_name;
  std::vector<std::string> describe_params;
  std::string describe_point;
  bool describe_json = false;
  int describe_order = 6;
  auto* describe_cmd = app.add_subcommand("describe", "Curvature and residuals at one point");
  describe_cmd->add_option("name", describe_name, "Catalog entry")->required();
  describe_cmd->add_option("--param", describe_params, "Catalog parameter k=v");
  describe_cmd->add_option("--point", describe_point, "Comma-separated coordinates")->required();
  describe_cmd->add_option("--jet-order", describe_order, "Jet order");
  describe_cmd->add_flag("--json", describe_json, "Structured output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    etlab::verify_sign_convention();
    if (*run_cmd) {
      etlab::RunConfig config = etlab::parse_run_config(read_file(config_path));
      if (seed) config.seed = *seed;
      if (samples) {
        if (*samples < 1) throw etlab::ConfigError("--samples must be at least 1");
        config.samples = *samples;
      }
      if (jet_order) config.jet_order = *jet_order;
      if (!report_format.empty()) config.report_format = report_format;
      const etlab::ResidualReport report = etlab::run(config);
      const std::string json = etlab::to_json(report);
      const std::string text = config.report_format == "json" ? json : etlab::render_text(json);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path);
        if (!out) throw etlab::ConfigError("cannot write '" + out_path + "'");
        out << text;
      }
      return report.passed() ? 0 : 1;
    }
    if (*list_cmd) {
      std::cout << (list_json ? etlab::list_catalog_json() : etlab::list_catalog_text());
      return 0;
    }
    const auto structure =
        etlab::make_catalog_structure(describe_name, parse_params(describe_params));
    std::cout << etlab::describe(structure, parse_point(describe_point), describe_json,
                                 describe_order);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "etlab: " << e.what() << "\n";
    return etlab::exit_code_for_exception(e);
  }
}
