#pragma once

/// @file cli.hpp
/// Command-line harness: `run`, `summarize` and `oracle` subcommands.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hypabc/report.hpp"

namespace hypabc {

struct RunConfig {
  std::vector<std::string> methods{"hypabc"};  // hypabc | random | grid
  std::string space_path;
  std::string objective = "mixed_sphere";  // mixed_sphere | knn_cv | external
  std::size_t budget = 0;
  std::vector<std::size_t> populations{50};
  std::optional<std::size_t> trial_limit;
  std::optional<double> target;
  std::uint64_t seed = 0;
  std::size_t repeats = 1;
  int parallel = 1;
  std::filesystem::path out_dir = "hypabc-out";
  std::string grid_steps;
  std::size_t grid_cap = 1'000'000;
  std::string external_cmd;
  double timeout_s = 600.0;
  bool log_timing = false;
  std::size_t max_idle_cycles = 50;

  /// Throws std::invalid_argument with a user-facing message.
  void validate() const;
};

/// A relative path that does not exist is retried under the bundled
/// data/spaces directory (with and without a .json suffix).
std::filesystem::path resolve_space_path(const std::string& path);

/// Executes every (method, np, repeat) combination, writing per-run logs and
/// results plus summary.csv / summary.txt into cfg.out_dir. Repeat r uses
/// seed + r. Returns the per-run summaries.
std::vector<RunSummary> execute_runs(const RunConfig& cfg, std::ostream& out);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace hypabc
