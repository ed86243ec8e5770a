#include "hypabc/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "hypabc/rng.hpp"

namespace hypabc {

namespace {

constexpr std::size_t kGridChunk = 4096;

double parse_step(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw GridError("bad grid step '" + text + "'");
  }
  if (used != text.size() || !(v > 0.0) || !std::isfinite(v)) {
    throw GridError("grid step must be a positive number, got '" + text + "'");
  }
  return v;
}

RunResult finish(RunResult r, const EvalCache& cache, EvalLog& log,
                 std::chrono::steady_clock::time_point start) {
  r.cache_hits = cache.hits();
  r.cache_misses = cache.misses();
  r.evaluations_used = cache.misses();
  r.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.log = log.release();
  return r;
}

void track_best(RunResult& r, const Configuration& config, double value, bool first) {
  if (first || value < r.best_objective) {
    r.best_config = config;
    r.best_objective = value;
  }
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
  GridSpec g;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) {
      g.default_step = parse_step(part);
    } else {
      g.steps[part.substr(0, eq)] = parse_step(part.substr(eq + 1));
    }
  }
  return g;
}

std::vector<double> grid_axis(const ParamSpec& param, std::optional<double> step) {
  std::vector<double> axis;
  if (param.kind == ParamKind::categorical) {
    for (std::size_t c = 0; c < param.choices.size(); ++c) axis.push_back(static_cast<double>(c));
    return axis;
  }
  if (!step) {
    if (param.kind == ParamKind::continuous) {
      throw GridError("parameter '" + param.name + "': continuous dimensions need a grid step");
    }
    step = 1.0;
  }
  if (!(*step > 0.0)) throw GridError("parameter '" + param.name + "': step must be positive");
  if (param.kind == ParamKind::integer && std::trunc(*step) != *step) {
    throw GridError("parameter '" + param.name + "': integer dimensions need whole steps");
  }
  const double start = param.lower_exclusive ? param.lower + *step : param.lower;
  const double slack = 1e-9 * (param.upper - param.lower);
  const double span = param.upper - start;
  if (span < -slack) return axis;
  const auto count = static_cast<std::size_t>(std::floor((span + slack) / *step)) + 1;
  axis.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    axis.push_back(std::min(start + static_cast<double>(n) * *step, param.upper));
  }
  return axis;
}

std::vector<std::vector<double>> grid_axes(const SearchSpace& space, const GridSpec& grid) {
  for (const auto& [name, step] : grid.steps) space.index_of(name);
  std::vector<std::vector<double>> axes;
  for (const auto& p : space.params()) {
    std::optional<double> step = grid.default_step;
    if (auto it = grid.steps.find(p.name); it != grid.steps.end()) step = it->second;
    if (p.kind == ParamKind::integer && !grid.steps.contains(p.name) && step &&
        std::trunc(*step) != *step) {
      step = std::nullopt;  // fractional default applies to continuous dims only
    }
    axes.push_back(grid_axis(p, step));
  }
  return axes;
}

std::size_t grid_cardinality(const SearchSpace& space, const GridSpec& grid) {
  std::size_t total = 1;
  for (const auto& axis : grid_axes(space, grid)) {
    if (axis.empty()) return 0;
    if (total > std::numeric_limits<std::size_t>::max() / axis.size()) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= axis.size();
  }
  return total;
}

RunResult grid_search(const SearchSpace& space, const GridSpec& grid,
                      const ObjectiveHandle& objective, const GridOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto axes = grid_axes(space, grid);
  const std::size_t cardinality = grid_cardinality(space, grid);
  if (cardinality > options.cap) {
    throw GridError("grid has " +
                    (cardinality == std::numeric_limits<std::size_t>::max()
                         ? std::string("more than 2^64")
                         : std::to_string(cardinality)) +
                    " points, above the cap of " + std::to_string(options.cap));
  }
  if (cardinality == 0) throw GridError("grid is empty");

  RunResult r;
  r.method = "grid";
  r.grid_cardinality = cardinality;
  EvalCache cache;
  EvalLog log(options.observer);

  const std::size_t d = space.dimension();
  std::vector<std::size_t> digit(d, 0);
  std::vector<Configuration> chunk;
  for (std::size_t done = 0; done < cardinality;) {
    chunk.clear();
    while (chunk.size() < kGridChunk && done + chunk.size() < cardinality) {
      Configuration c;
      c.values.resize(d);
      for (std::size_t j = 0; j < d; ++j) c.values[j] = axes[j][digit[j]];
      chunk.push_back(repair(space, c.values));
      for (std::size_t j = d; j-- > 0;) {
        if (++digit[j] < axes[j].size()) break;
        digit[j] = 0;
      }
    }
    const auto items = evaluate_batch(cache, objective, space, chunk,
                                      std::numeric_limits<std::size_t>::max(),
                                      options.parallel_width);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      log.append(0, Phase::baseline, decode(space, chunk[i]), items[i].result);
      track_best(r, chunk[i], items[i].result.value, done + i == 0);
    }
    done += chunk.size();
  }
  r.best = decode(space, r.best_config);
  r.stop_reason = "exhausted";
  return finish(std::move(r), cache, log, start);
}

RunResult random_search(const SearchSpace& space, std::size_t budget,
                        const ObjectiveHandle& objective, std::uint64_t seed,
                        const RandomSearchOptions& options) {
  if (budget == 0) throw std::invalid_argument("random search budget must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  std::vector<Configuration> samples;
  samples.reserve(budget);
  for (std::size_t i = 0; i < budget; ++i) samples.push_back(sample_uniform(space, rng));

  RunResult r;
  r.method = "random";
  EvalCache cache;
  EvalLog log(options.observer);
  const auto items = evaluate_batch(cache, objective, space, samples,
                                    std::numeric_limits<std::size_t>::max(),
                                    options.parallel_width);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    log.append(0, Phase::baseline, decode(space, samples[i]), items[i].result);
    track_best(r, samples[i], items[i].result.value, i == 0);
  }
  r.best = decode(space, r.best_config);
  r.stop_reason = "budget";
  return finish(std::move(r), cache, log, start);
}

}  // namespace hypabc
