#pragma once

// Job configuration, validation and execution for the inscribe tool.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace inscribed::app {

using nlohmann::json;

/// Schema violation; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Task { Cm, Find, Sweep, Trace, Degree, Coverage, Render };

struct OutputPaths {
  std::string dir = ".";
  std::string report = "report.json";
  std::string csv = "trajectories.csv";
  std::string svg = "figure.svg";
};

struct JobConfig {
  Task task = Task::Cm;
  /// The validated document, echoed into the report.
  json source;
  std::uint64_t seed = 1;
  OutputPaths output;
};

/// Checks keys, types and cross-field requirements. Throws ConfigError.
JobConfig parse_job(const json& doc);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool check_jacobian = false;
};

struct RunResult {
  int exit_code = 0;
  json report;
  std::vector<std::string> written;
  std::string summary;
};

/// Runs the job and writes its artifacts. Exit code 0 on success, 1 when a
/// solver step failed (the partial report is still written).
RunResult run_job(const JobConfig& job, const RunOptions& options);

std::string to_string(Task task);

}  // namespace inscribed::app
