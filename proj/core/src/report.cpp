#include "etlab/report.hpp"

#include <cstdio>
#include <json.hpp>
#include <sstream>

namespace etlab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kVacuous: return "vacuous";
  }
  return "fail";
}

bool ResidualReport::passed() const {
  for (const auto& r : records)
    if (r.verdict != Verdict::kPass) return false;
  return true;
}

void finalize_verdicts(ResidualReport& report) {
  for (auto& r : report.records) {
    if (r.evaluated == 0) {
      r.verdict = Verdict::kVacuous;
    } else {
      r.verdict = r.max_relative <= r.tolerance ? Verdict::kPass : Verdict::kFail;
    }
  }
}

std::string to_json(const ResidualReport& report) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["schema"] = ResidualReport::kSchema;
  doc["structure"] = {{"name", report.structure}, {"dim", report.dim}, {"case", report.case_tag}};
  doc["seed"] = report.seed;
  doc["samples"] = report.samples;
  doc["jet_order"] = report.jet_order;
  doc["suites"] = report.suites;
  ordered_json records = ordered_json::array();
  for (const auto& r : report.records) {
    records.push_back({{"suite", r.suite},
                       {"identity", r.identity},
                       {"anchor", r.anchor},
                       {"evaluated", r.evaluated},
                       {"skipped", r.skipped},
                       {"max_relative", r.max_relative},
                       {"mean_relative", r.mean_relative},
                       {"tolerance", r.tolerance},
                       {"verdict", to_string(r.verdict)}});
  }
  doc["identities"] = std::move(records);
  doc["notes"] = report.notes;
  doc["overall"] = report.passed() ? "pass" : "fail";
  return doc.dump(2) + "\n";
}

std::string render_text(const std::string& json_report) {
  const auto doc = nlohmann::ordered_json::parse(json_report);
  std::ostringstream os;
  const auto& s = doc["structure"];
  os << "structure " << s["name"].get<std::string>() << " (n = " << s["dim"].get<int>()
     << ", case " << s["case"].get<std::string>() << ")\n";
  os << "seed " << doc["seed"].get<std::uint64_t>() << ", samples " << doc["samples"].get<int>()
     << ", jet order " << doc["jet_order"].get<int>() << "\n\n";
  char line[512];
  std::snprintf(line, sizeof line, "%-22s %-34s %5s %5s %12s %12s %10s  %s\n", "suite",
                "identity", "eval", "skip", "max rel", "mean rel", "tol", "verdict");
  os << line;
  for (const auto& r : doc["identities"]) {
    std::snprintf(line, sizeof line, "%-22s %-34s %5d %5d %12.3e %12.3e %10.1e  %s\n",
                  r["suite"].get<std::string>().c_str(), r["identity"].get<std::string>().c_str(),
                  r["evaluated"].get<int>(), r["skipped"].get<int>(),
                  r["max_relative"].is_number() ? r["max_relative"].get<double>() : NAN,
                  r["mean_relative"].is_number() ? r["mean_relative"].get<double>() : NAN,
                  r["tolerance"].get<double>(), r["verdict"].get<std::string>().c_str());
    os << line;
  }
  if (!doc["notes"].empty()) {
    os << "\nnotes:\n";
    for (const auto& n : doc["notes"]) os << "  " << n.get<std::string>() << "\n";
  }
  os << "\noverall: " << doc["overall"].get<std::string>() << "\n";
  return os.str();
}

}  // namespace etlab
