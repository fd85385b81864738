#pragma once

#include "corrlab/json_io.hpp"

#include <functional>
#include <string>
#include <vector>

namespace corrlab {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Raised for unreadable or malformed scenario files (process exit 2).
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string name;
  std::string kind;
  Json inputs;
  Tolerance tol;
  std::uint64_t seed = 0;
  Json expect;  // optional pinned expectations
};

struct Report {
  std::string scenario;
  std::string kind;
  std::string verdict;  // "pass" | "fail" | "refused"
  std::string detail;   // explanation for fail/refused
  Json residuals = Json::object();
  Json dimensions = Json::object();
  Json mult_matrices = Json::object();
  std::uint64_t seed = 0;
  double duration_ms = 0.0;

  Json to_json(bool with_timing = false) const;
  // Human-readable rendering of the JSON content (same data, one code path).
  std::string to_text(bool with_timing = false) const;
  int exit_code() const;  // 0 pass, 1 fail, 3 refused
};

Scenario scenario_from_json(const Json& j);
Scenario load_scenario(const std::string& path);

Report run_scenario(const Scenario& s);

struct SuiteResult {
  std::vector<Report> reports;  // sorted by scenario name
  Index scenario_count = 0;
  Index pass_count = 0;
  int exit_code = 0;  // 2 if any parse error, else 1 if any fail, else 3 if refused
  double duration_ms = 0.0;
};

// Pure progress record, delivered once per completed scenario.  The callback
// must be safe to call from worker threads.
struct SuiteProgress {
  Index completed = 0;
  Index total = 0;
  std::string scenario;
  std::string verdict;
};
using ProgressFn = std::function<void(const SuiteProgress&)>;

SuiteResult run_suite(const std::string& directory, int jobs,
                      const ProgressFn& progress = {});

// JSON skeleton describing the inputs of a scenario kind.
Json schema_for(const std::string& kind);
std::vector<std::string> scenario_kinds();

}  // namespace corrlab
