#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dynsense/errors.hpp"

namespace dynsense::experiments {

enum class Verdict { pass, fail, inconclusive };

const char* verdict_name(Verdict v);

struct Observation {
  std::string label;
  std::string value;
};

/// Structured experiment output. Everything except runtime_ms is a pure
/// function of (experiment, params, seed, version).
struct Report {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> params;  // effective, sorted
  std::vector<Observation> observations;
  Verdict verdict = Verdict::fail;
  std::int64_t ambiguity_count = 0;
  std::uint64_t seed = 0;
  std::int64_t runtime_ms = 0;
  std::string version;
};

using Params = std::map<std::string, std::string>;

std::vector<std::string> experiment_names();

/// Runs a registered experiment. Unknown names and unknown or malformed
/// parameters raise UsageError. Every pass verdict is backed by witnesses
/// that were re-verified by an independent check before the report was
/// emitted.
Report run_experiment(const std::string& name, const Params& params = {},
                      std::uint64_t seed = 0);

/// UTF-8 JSON, stable field order. With include_timing false the runtime
/// field is written as 0 so that repeated runs are byte-identical.
std::string report_json(const Report& report, bool include_timing = true);

/// Same observation values, label,value CSV rows.
std::string report_csv(const Report& report, bool include_timing = true);

}  // namespace dynsense::experiments
