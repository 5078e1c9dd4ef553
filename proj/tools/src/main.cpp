#include <cstdint>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "inscribed/error.hpp"
#include "job.hpp"

int main(int argc, char** argv) {
  using inscribed::app::ConfigError;
  using nlohmann::json;

  CLI::App app{"inscribe: similar simplices inscribed in radial-graph spheres"};
  std::string config_path;
  std::string task;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool check_jacobian = false;
  bool quiet = false;
  app.add_option("task", task, "task to run; overrides the task in the config (cm, find, sweep, trace, degree, "
                               "coverage, render)");
  app.add_option("-c,--config", config_path, "job file (JSON)")->required()->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized searches; overrides the config");
  auto* out_opt = app.add_option("-o,--out", out_dir, "output directory; overrides output.dir");
  app.add_flag("--check-jacobian", check_jacobian, "compare analytic Jacobians with finite differences");
  app.add_flag("-q,--quiet", quiet, "print nothing on success");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    json doc;
    {
      std::ifstream f(config_path);
      try {
        doc = json::parse(f);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    if (!task.empty()) {
      if (!doc.is_object()) throw ConfigError("the job must be an object");
      doc["task"] = task;
    }
    const auto job = inscribed::app::parse_job(doc);
    inscribed::app::RunOptions options;
    if (*seed_opt) options.seed = seed;
    if (*out_opt) options.out_dir = out_dir;
    options.check_jacobian = check_jacobian;
    const auto result = inscribed::app::run_job(job, options);
    if (!quiet || result.exit_code != 0) {
      std::ostream& os = result.exit_code == 0 ? std::cout : std::cerr;
      os << inscribed::app::to_string(job.task) << ": " << result.summary << '\n';
      for (const auto& path : result.written) os << "  wrote " << path << '\n';
    }
    return result.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "inscribe: invalid job: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "inscribe: " << e.what() << '\n';
    return 1;
  }
}
