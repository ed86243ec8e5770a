#pragma once

/// @file baselines.hpp
/// Random search and grid search under the same cache, budget and logging
/// contract as the colony. Both log with phase "baseline".

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypabc/objective.hpp"
#include "hypabc/result.hpp"
#include "hypabc/space.hpp"

namespace hypabc {

inline constexpr std::size_t kDefaultGridCap = 1'000'000;

class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-dimension step for numeric dimensions; categoricals always use every
/// choice. Integer dimensions without a step use 1. Continuous dimensions need
/// an explicit step (named, or the default).
struct GridSpec {
  std::map<std::string, double> steps;
  std::optional<double> default_step;

  /// Parses "5" (default step) or "name=5,other=0.25" (optionally mixed with a
  /// bare default).
  static GridSpec parse(const std::string& text);
};

/// Values lower, lower+step, ... <= upper. Exclusive lower bounds start at
/// lower+step instead.
std::vector<double> grid_axis(const ParamSpec& param, std::optional<double> step);
std::vector<std::vector<double>> grid_axes(const SearchSpace& space, const GridSpec& grid);

/// Product of axis sizes, saturating at SIZE_MAX.
std::size_t grid_cardinality(const SearchSpace& space, const GridSpec& grid);

struct GridOptions {
  std::size_t cap = kDefaultGridCap;
  int parallel_width = 1;
  EvalObserver observer;
};

/// Evaluates every grid point once, first dimension most significant.
/// Throws GridError when the cardinality exceeds the cap.
RunResult grid_search(const SearchSpace& space, const GridSpec& grid,
                      const ObjectiveHandle& objective, const GridOptions& options = {});

struct RandomSearchOptions {
  int parallel_width = 1;
  EvalObserver observer;
};

/// `budget` independent uniform samples, each evaluated through the cache.
RunResult random_search(const SearchSpace& space, std::size_t budget,
                        const ObjectiveHandle& objective, std::uint64_t seed,
                        const RandomSearchOptions& options = {});

}  // namespace hypabc
