#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace boussinesq {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "boussinesq-lab 0.1.0";

enum class Verdict { Pass, Fail, Advisory };
std::string_view to_string(Verdict verdict);

/// One checked claim. Advisory records carry within_tolerance instead of a
/// pass/fail verdict and never affect the exit status.
struct CheckRecord {
  std::string claim;
  std::string anchor;
  json predicted;
  json measured;
  json tolerance;
  Verdict verdict = Verdict::Advisory;
  bool within_tolerance = false;
  std::string note;

  json to_json() const;
};

struct ExperimentReport {
  json config;
  std::vector<CheckRecord> records;
  double wall_time = 0.0;

  bool ok() const;  // no failed mandatory record
  const CheckRecord* find(std::string_view claim) const;
  /// The body excludes the wall time, so equal configs give equal bodies.
  json body() const;
  json to_json() const;
};

struct CatalogEntry {
  std::string id;
  std::string summary;
  std::vector<std::string> anchors;
};

std::vector<CatalogEntry> list_experiments();
json catalog_json();
std::vector<CatalogEntry> catalog_from_json(const json& doc);

/// Full default document {experiment, seed, output, params} for an id.
/// ConfigInvalid for unknown ids.
json default_config(const std::string& id);

/// Applies "key=value" with a dotted key. Keys other than experiment, seed and
/// output are looked up under params. The value is parsed as JSON when
/// possible, else kept as a string.
void apply_override(json& config, const std::string& assignment);

/// Merges the document over the defaults of its experiment and validates every
/// parameter. ConfigInvalid names the offending key or condition.
json resolve_config(const json& config);

/// Runs one experiment. Module errors become failed records. When output is a
/// non-empty directory path, report.json and the series files are written there.
ExperimentReport run_experiment(const json& config);

}  // namespace boussinesq
