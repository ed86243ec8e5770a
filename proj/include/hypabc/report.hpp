#pragma once

/// @file report.hpp
/// Run-result documents and per-group summaries of repeated runs.

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypabc/result.hpp"

namespace hypabc {

/// The per-run facts a summary needs. `np` is 0 for methods without a population.
struct RunSummary {
  std::string method;
  std::string objective;
  std::size_t np = 0;
  std::uint64_t seed = 0;
  double best_objective = 0.0;
  std::size_t evaluations_used = 0;
  std::size_t cycles = 0;
  double wall_time_s = 0.0;
};

nlohmann::ordered_json run_result_to_json(const RunResult& result, const RunSummary& meta,
                                          const std::string& log_path);
/// Throws std::runtime_error naming the first missing or mistyped field.
RunSummary run_summary_from_json(const nlohmann::json& doc);

RunSummary summary_of(const RunResult& result, const std::string& objective, std::size_t np,
                      std::uint64_t seed);

inline const std::vector<std::string> kGroupKeys = {"method", "objective", "np"};

struct SummaryRow {
  std::vector<std::pair<std::string, std::string>> group;
  std::size_t runs = 0;
  double median_best = 0.0;
  double mean_best = 0.0;
  double min_best = 0.0;
  double mean_evaluations = 0.0;
  double mean_wall_time_s = 0.0;
};

/// One row per distinct combination of `group_keys` (subset of kGroupKeys),
/// ordered by method, objective, then numeric np. No keys gives one global row.
std::vector<SummaryRow> summarize(const std::vector<RunSummary>& runs,
                                  const std::vector<std::string>& group_keys);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
/// Aligned text table; includes the accuracy-style complement 1 - objective.
void write_summary_text(std::ostream& out, const std::vector<SummaryRow>& rows);

/// For rows that differ only in np: reports whether median best objective
/// decreases as np grows. Informational.
std::string np_trend_report(const std::vector<SummaryRow>& rows);

}  // namespace hypabc
