#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace spw {

// Outcome of one batch experiment.  `csv` is the full report body; it is a
// pure function of (suite, seed, params), so re-running with the same seed
// reproduces it byte for byte.  Wall-clock time lives only in the summary,
// never in the CSV.
struct SuiteResult {
  std::string suite;
  bool pass = false;
  double worst_ratio = 0.0;
  std::string tolerances;  // the pinned thresholds this suite asserted
  double runtime_ms = 0.0;
  std::vector<std::string> notes;
  std::string csv;
};

const std::vector<std::string>& suite_names();
bool is_suite_name(const std::string& name);

// Runs the named suite.  `params` may override suite-specific knobs
// (documented in the README); unknown keys are ignored.  Throws
// std::invalid_argument for an unknown suite name.
SuiteResult run_suite(const std::string& name, std::uint64_t seed,
                      const nlohmann::json& params);

// {suite, pass, worst_ratio, tolerances, runtime_ms} as a JSON document.
std::string summary_json(const SuiteResult& result);

}  // namespace spw
