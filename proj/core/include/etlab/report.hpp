#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace etlab {

enum class Verdict { kPass, kFail, kVacuous };

std::string to_string(Verdict v);

/// Aggregated residuals of one identity over the sample points.
struct IdentityRecord {
  std::string suite;
  std::string identity;
  std::string anchor;  // the identity as a formula
  int evaluated = 0;
  int skipped = 0;
  double max_relative = 0.0;
  double mean_relative = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::kVacuous;
};

struct ResidualReport {
  static constexpr int kSchema = 1;

  std::string structure;
  int dim = 0;
  std::string case_tag;
  std::uint64_t seed = 0;
  int samples = 0;
  int jet_order = 0;
  std::vector<std::string> suites;
  std::vector<IdentityRecord> records;
  std::vector<std::string> notes;

  /// Every record passed; a record whose points were all skipped fails.
  bool passed() const;
};

/// Fills verdicts from the residual statistics.
void finalize_verdicts(ResidualReport& report);

std::string to_json(const ResidualReport& report);
/// Human-readable table rendered from the JSON document.
std::string render_text(const std::string& json_report);

}  // namespace etlab
