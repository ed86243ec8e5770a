#include "hypabc/colony.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace hypabc {

double fitness_of(double objective) {
  if (!std::isfinite(objective)) throw std::invalid_argument("fitness_of: non-finite objective");
  return objective >= 0.0 ? 1.0 / (1.0 + objective) : 1.0 + std::abs(objective);
}

std::vector<double> selection_probabilities(std::span<const double> fitness) {
  if (fitness.empty()) throw std::invalid_argument("selection_probabilities: empty population");
  double total = 0.0;
  for (double f : fitness) {
    if (!(f > 0.0)) throw std::invalid_argument("selection_probabilities: fitness must be positive");
    total += f;
  }
  if (!(total > 0.0)) throw std::invalid_argument("selection_probabilities: zero total fitness");
  std::vector<double> p(fitness.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = fitness[i] / total;
  return p;
}

std::vector<double> selection_probabilities(std::span<const FoodSource> sources) {
  std::vector<double> fitness(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) fitness[i] = sources[i].fitness;
  return selection_probabilities(fitness);
}

std::vector<bool> onlooker_selection(std::span<const double> probabilities, Rng& rng) {
  std::vector<bool> selected(probabilities.size());
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    selected[i] = rng.uniform01() < probabilities[i];
  }
  return selected;
}

void ColonyParams::validate() const {
  if (population < 2) throw std::invalid_argument("population must be at least 2");
  if (max_evaluations < population) {
    throw std::invalid_argument("budget (" + std::to_string(max_evaluations) +
                                ") is smaller than the population (" +
                                std::to_string(population) + ")");
  }
  if (trial_limit && *trial_limit == 0) throw std::invalid_argument("trial limit must be positive");
  if (parallel_width < 1) throw std::invalid_argument("parallel width must be positive");
  if (retry_limit < 1) throw std::invalid_argument("retry limit must be positive");
  if (max_idle_cycles < 1) throw std::invalid_argument("idle-cycle limit must be positive");
}

Configuration hypabc_neighbor_move(const SearchSpace& space, const ColonyState& state,
                                   std::size_t i, Rng& rng) {
  const std::size_t n = state.sources.size();
  const std::size_t dim = rng.index(space.dimension());
  std::size_t k = rng.index(n - 1);
  if (k >= i) ++k;
  const auto& current = state.sources[i].config;
  if (space[dim].is_binary_categorical()) return flip_binary(space, current, dim);
  const double phi = rng.uniform(-1.0, 1.0);
  return neighbor(space, current, state.sources[k].config, dim, phi);
}

Colony::Colony(SearchSpace space, ColonyParams params, ObjectiveHandle objective,
               EvalObserver observer, CandidateGenerator generator)
    : space_(std::move(space)),
      params_(std::move(params)),
      objective_(std::move(objective)),
      generator_(std::move(generator)),
      rng_(params_.seed),
      log_(std::move(observer)) {
  params_.validate();
}

bool Colony::target_met() const {
  return params_.target_objective && !state_.sources.empty() &&
         state_.best.objective <= *params_.target_objective;
}

void Colony::record(Phase phase, const Configuration& config, const CachedValue& value) {
  log_.append(state_.cycle, phase, decode(space_, config), value);
  if (!value.was_hit) ++state_.evaluations_used;
  if (state_.evaluations_used > params_.max_evaluations) {
    throw std::logic_error("evaluation budget overrun");
  }
  update_best(config, value.value);
}

void Colony::update_best(const Configuration& config, double value) {
  if (!initialized_ || value < state_.best.objective) {
    state_.best.config = config;
    state_.best.objective = value;
    state_.best.fitness = fitness_of(value);
    state_.best.trial = 0;
    initialized_ = true;
  }
}

void Colony::apply(std::size_t i, Configuration candidate, double value) {
  auto& src = state_.sources[i];
  if (value < src.objective) {
    src.config = std::move(candidate);
    src.objective = value;
    src.fitness = fitness_of(value);
    src.trial = 0;
  } else {
    ++src.trial;
  }
}

void Colony::initialize() {
  state_ = ColonyState{};
  initialized_ = false;
  std::vector<Configuration> initial;
  initial.reserve(params_.population);
  for (std::size_t i = 0; i < params_.population; ++i) {
    initial.push_back(sample_uniform(space_, rng_));
  }
  const auto items = evaluate_batch(cache_, objective_, space_, initial, budget_left(),
                                    params_.parallel_width);
  state_.sources.resize(initial.size());
  for (std::size_t i = 0; i < initial.size(); ++i) {
    const auto& r = items[i].result;
    record(Phase::init, initial[i], r);
    state_.sources[i] = FoodSource{initial[i], r.value, fitness_of(r.value), 0};
  }
}

std::optional<Configuration> Colony::draw_candidate(std::size_t i) {
  for (std::size_t attempt = 0; attempt < params_.retry_limit; ++attempt) {
    auto candidate = generator_(space_, state_, i, rng_);
    if (candidate != state_.sources[i].config) return candidate;
  }
  return std::nullopt;
}

AttemptOutcome Colony::attempt_improvement(std::size_t i, Phase phase) {
  if (i >= state_.sources.size()) throw std::out_of_range("attempt_improvement: bad source index");
  auto candidate = draw_candidate(i);
  if (!candidate) {
    ++state_.sources[i].trial;
    return AttemptOutcome::duplicate;
  }
  const Configuration one[] = {*candidate};
  const auto items = evaluate_batch(cache_, objective_, space_, one, budget_left(), 1);
  if (!items[0].evaluated) {
    stop_reason_ = "budget";
    return AttemptOutcome::exhausted;
  }
  const double value = items[0].result.value;
  record(phase, *candidate, items[0].result);
  const bool better = value < state_.sources[i].objective;
  apply(i, std::move(*candidate), value);
  return better ? AttemptOutcome::accepted : AttemptOutcome::rejected;
}

bool Colony::employed_phase() {
  const std::size_t n = state_.sources.size();
  std::vector<std::optional<Configuration>> candidates(n);
  for (std::size_t i = 0; i < n; ++i) candidates[i] = draw_candidate(i);

  std::vector<Configuration> batch;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (candidates[i]) {
      slot[i] = batch.size();
      batch.push_back(*candidates[i]);
    }
  }
  const auto items = evaluate_batch(cache_, objective_, space_, batch, budget_left(),
                                    params_.parallel_width);

  for (std::size_t i = 0; i < n; ++i) {
    if (!candidates[i]) {
      ++state_.sources[i].trial;
      continue;
    }
    const auto& item = items[slot[i]];
    if (!item.evaluated) {
      stop_reason_ = "budget";
      return false;
    }
    record(Phase::employed, *candidates[i], item.result);
    apply(i, std::move(*candidates[i]), item.result.value);
  }
  if (target_met()) {
    stop_reason_ = "target";
    return false;
  }
  return true;
}

bool Colony::onlooker_phase() {
  const auto probabilities = selection_probabilities(state_.sources);
  const auto selected = onlooker_selection(probabilities, rng_);
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (!selected[i]) continue;
    if (attempt_improvement(i, Phase::onlooker) == AttemptOutcome::exhausted) return false;
    if (target_met()) {
      stop_reason_ = "target";
      return false;
    }
  }
  return true;
}

bool Colony::scout_phase() {
  std::size_t worst = 0;
  for (std::size_t i = 1; i < state_.sources.size(); ++i) {
    if (state_.sources[i].trial > state_.sources[worst].trial) worst = i;
  }
  if (state_.sources[worst].trial <= params_.effective_trial_limit(space_)) return true;

  const Configuration fresh[] = {sample_uniform(space_, rng_)};
  const auto items = evaluate_batch(cache_, objective_, space_, fresh, budget_left(), 1);
  if (!items[0].evaluated) {
    stop_reason_ = "budget";
    return false;
  }
  const auto& r = items[0].result;
  record(Phase::scout, fresh[0], r);
  state_.sources[worst] = FoodSource{fresh[0], r.value, fitness_of(r.value), 0};
  if (target_met()) {
    stop_reason_ = "target";
    return false;
  }
  return true;
}

RunResult Colony::run() {
  const auto start = std::chrono::steady_clock::now();
  stop_reason_.clear();
  initialize();
  if (target_met()) stop_reason_ = "target";

  std::size_t idle = 0;
  while (stop_reason_.empty()) {
    if (state_.evaluations_used >= params_.max_evaluations) {
      stop_reason_ = "budget";
      break;
    }
    ++state_.cycle;
    const std::size_t before = state_.evaluations_used;
    if (!employed_phase() || !onlooker_phase() || !scout_phase()) break;
    idle = state_.evaluations_used == before ? idle + 1 : 0;
    if (idle >= params_.max_idle_cycles) stop_reason_ = "idle";
  }

  RunResult result;
  result.method = "hypabc";
  result.best_config = state_.best.config;
  result.best = decode(space_, state_.best.config);
  result.best_objective = state_.best.objective;
  result.evaluations_used = state_.evaluations_used;
  result.cycles = state_.cycle;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.log = log_.records();
  result.cache_hits = cache_.hits();
  result.cache_misses = cache_.misses();
  result.stop_reason = stop_reason_;
  return result;
}

RunResult run_hypabc(const SearchSpace& space, const ColonyParams& params,
                     const ObjectiveHandle& objective, EvalObserver observer) {
  return Colony(space, params, objective, std::move(observer)).run();
}

}  // namespace hypabc
