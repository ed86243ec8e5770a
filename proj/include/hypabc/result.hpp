#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hypabc/objective.hpp"
#include "hypabc/space.hpp"

namespace hypabc {

/// Outcome of one optimizer run (HyP-ABC or a baseline).
struct RunResult {
  std::string method;
  Configuration best_config;
  Assignment best;
  double best_objective = 0.0;
  std::size_t evaluations_used = 0;  // fresh objective computations
  std::size_t cycles = 0;
  double wall_time_s = 0.0;
  std::vector<EvalRecord> log;
  std::optional<std::size_t> grid_cardinality;
  std::size_t cache_hits = 0;
  std::size_t cache_misses = 0;
  std::string stop_reason;

  /// Accuracy-style complement of the minimized objective.
  double best_accuracy() const { return 1.0 - best_objective; }
};

}  // namespace hypabc
