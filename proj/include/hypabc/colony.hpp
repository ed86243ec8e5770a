#pragma once

/// @file colony.hpp
/// HyP-ABC: artificial bee colony adapted to mixed integer, categorical and
/// continuous hyper-parameter spaces.
///
/// One cycle runs the employed phase (one neighbor move per food source), the
/// onlooker phase (fitness-proportional re-exploitation) and the scout phase
/// (at most one abandoned source re-sampled uniformly). Objectives are
/// minimized. Every candidate is repaired before evaluation, a candidate equal
/// to the source it challenges is never evaluated, and evaluations go through a
/// cache so a configuration is computed at most once. Cache hits do not count
/// against the evaluation budget.
///
/// Employed-phase candidates are all drawn from the population as it stands at
/// phase start and may be evaluated concurrently (parallel_width); they are
/// applied in index order, so the run is identical for any width.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hypabc/objective.hpp"
#include "hypabc/result.hpp"
#include "hypabc/rng.hpp"
#include "hypabc/space.hpp"

namespace hypabc {

inline constexpr std::size_t kDefaultPopulation = 50;
inline constexpr std::size_t kDefaultRetryLimit = 10;
inline constexpr std::size_t kDefaultMaxIdleCycles = 50;

/// fit = 1 / (1 + f) for f >= 0, 1 + |f| otherwise. Throws on non-finite f.
double fitness_of(double objective);

struct FoodSource {
  Configuration config;
  double objective = 0.0;
  double fitness = 1.0;
  std::size_t trial = 0;
};

/// Roulette-wheel probabilities fit_i / sum fit_j.
std::vector<double> selection_probabilities(std::span<const FoodSource> sources);
std::vector<double> selection_probabilities(std::span<const double> fitness);

/// Draws one u per source and selects source i when u < P_i.
std::vector<bool> onlooker_selection(std::span<const double> probabilities, Rng& rng);

struct ColonyParams {
  std::size_t population = kDefaultPopulation;
  std::optional<std::size_t> trial_limit;  // defaults to population * dimension
  std::size_t max_evaluations = 0;
  std::optional<double> target_objective;
  std::uint64_t seed = 0;
  int parallel_width = 1;
  std::size_t retry_limit = kDefaultRetryLimit;
  /// Stop after this many consecutive cycles that computed nothing new
  /// (every candidate was a duplicate or a cache hit).
  std::size_t max_idle_cycles = kDefaultMaxIdleCycles;

  std::size_t effective_trial_limit(const SearchSpace& space) const {
    return trial_limit.value_or(population * space.dimension());
  }
  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

struct ColonyState {
  std::vector<FoodSource> sources;
  std::size_t evaluations_used = 0;
  FoodSource best;
  std::size_t cycle = 0;
};

/// Produces a candidate for source i; the default is the HyP-ABC neighbor move.
using CandidateGenerator =
    std::function<Configuration(const SearchSpace&, const ColonyState&, std::size_t, Rng&)>;

/// Picks a uniform dimension and a uniform partner k != i. Binary categorical
/// dimensions are XOR-flipped; others take x_ij + phi (x_ij - x_kj) with phi
/// uniform in [-1, 1], then repair.
Configuration hypabc_neighbor_move(const SearchSpace& space, const ColonyState& state,
                                   std::size_t i, Rng& rng);

enum class AttemptOutcome { accepted, rejected, duplicate, exhausted };

class Colony {
 public:
  Colony(SearchSpace space, ColonyParams params, ObjectiveHandle objective,
         EvalObserver observer = {}, CandidateGenerator generator = hypabc_neighbor_move);

  /// Samples and evaluates the initial population (NP draws, cycle 0).
  void initialize();

  /// One improvement attempt on source i (onlooker semantics: sequential,
  /// replacements visible immediately).
  AttemptOutcome attempt_improvement(std::size_t i, Phase phase);

  /// Each returns false when the run must stop (budget exhausted or target met).
  bool employed_phase();
  bool onlooker_phase();
  bool scout_phase();

  /// initialize + cycles until budget, target or idle stop.
  RunResult run();

  const ColonyState& state() const { return state_; }
  ColonyState& mutable_state() { return state_; }
  const EvalCache& cache() const { return cache_; }
  const EvalLog& log() const { return log_; }
  const SearchSpace& space() const { return space_; }
  const ColonyParams& params() const { return params_; }
  std::size_t budget_left() const { return params_.max_evaluations - state_.evaluations_used; }
  bool target_met() const;

 private:
  std::optional<Configuration> draw_candidate(std::size_t i);
  void record(Phase phase, const Configuration& config, const CachedValue& value);
  void apply(std::size_t i, Configuration candidate, double value);
  void update_best(const Configuration& config, double value);

  SearchSpace space_;
  ColonyParams params_;
  ObjectiveHandle objective_;
  CandidateGenerator generator_;
  Rng rng_;
  EvalCache cache_;
  EvalLog log_;
  ColonyState state_;
  bool initialized_ = false;
  std::string stop_reason_;
};

/// Convenience wrapper: Colony(space, params, objective).run().
RunResult run_hypabc(const SearchSpace& space, const ColonyParams& params,
                     const ObjectiveHandle& objective, EvalObserver observer = {});

}  // namespace hypabc
