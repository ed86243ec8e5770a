#pragma once

/// @file objective.hpp
/// The black-box evaluation boundary. Objectives are minimized; ML-style
/// objectives report 1 - accuracy.

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypabc/space.hpp"

namespace hypabc {

class ObjectiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ObjectiveHandle {
  /// Must be safe to call from several threads at once.
  std::function<double(const Assignment&)> evaluate;
  std::string description;
  bool deterministic = true;
};

/// Memo of objective values keyed on the exact bit pattern of repaired
/// configurations. Reads may be concurrent; writes take an exclusive lock.
class EvalCache {
 public:
  using Key = std::vector<std::uint64_t>;

  static Key key_of(const Configuration& config);

  std::optional<double> lookup(const Configuration& config) const;
  bool contains(const Configuration& config) const { return lookup(config).has_value(); }
  /// Returns false when the key was already present (value left unchanged).
  bool insert(const Configuration& config, double value);

  std::size_t size() const;
  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }
  void count_hit() { ++hits_; }
  void count_miss() { ++misses_; }

 private:
  mutable std::shared_mutex mutex_;
  std::map<Key, double> values_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

struct CachedValue {
  double value = 0.0;
  bool was_hit = false;
  double elapsed_ms = 0.0;
};

/// Looks the configuration up, evaluating and storing it on a miss.
/// Objective failures are rethrown as ObjectiveError carrying the decoded config.
CachedValue cached_evaluate(EvalCache& cache, const ObjectiveHandle& handle,
                            const Configuration& config, const SearchSpace& space);

struct BatchItem {
  CachedValue result;
  bool evaluated = false;  // false when the batch ran out of fresh-evaluation budget
};

/// Evaluates a batch through the cache, processing requests in index order.
/// The first occurrence of an unseen configuration is a fresh evaluation;
/// repeats within the batch are hits. At most `max_fresh` fresh evaluations are
/// performed: the batch is cut at the first request that would exceed it, and
/// that request and everything after it are left unevaluated.
/// Fresh evaluations run on up to `width` OpenMP threads; results are applied
/// to the cache in index order so the outcome does not depend on `width`.
std::vector<BatchItem> evaluate_batch(EvalCache& cache, const ObjectiveHandle& handle,
                                      const SearchSpace& space,
                                      std::span<const Configuration> configs,
                                      std::size_t max_fresh, int width);

/// Serial reference for evaluate_batch.
std::vector<BatchItem> evaluate_batch_serial(EvalCache& cache, const ObjectiveHandle& handle,
                                             const SearchSpace& space,
                                             std::span<const Configuration> configs,
                                             std::size_t max_fresh);

enum class Phase { init, employed, onlooker, scout, baseline };
std::string to_string(Phase phase);

struct EvalRecord {
  std::size_t eval_index = 0;
  std::size_t cycle = 0;
  Phase phase = Phase::init;
  Assignment config;
  double objective = 0.0;
  double best_so_far = 0.0;
  bool cache_hit = false;
  double elapsed_ms = 0.0;
};

using EvalObserver = std::function<void(const EvalRecord&)>;

/// Appends records with consecutive indices and a running best.
class EvalLog {
 public:
  explicit EvalLog(EvalObserver observer = {}) : observer_(std::move(observer)) {}

  const EvalRecord& append(std::size_t cycle, Phase phase, Assignment config,
                           const CachedValue& value);
  const std::vector<EvalRecord>& records() const { return records_; }
  std::vector<EvalRecord> release() { return std::move(records_); }

 private:
  EvalObserver observer_;
  std::vector<EvalRecord> records_;
};

inline constexpr const char* kLogCsvHeader =
    "eval_index,cycle,phase,objective,best_so_far,cache_hit,elapsed_ms,config_json";

/// Writes the evaluation log. With `with_timing` false the elapsed_ms column is
/// written as 0 so that replays are byte-identical.
void write_log_csv(std::ostream& out, std::span<const EvalRecord> records, bool with_timing);
nlohmann::ordered_json log_to_json(std::span<const EvalRecord> records, bool with_timing);

/// Shortest decimal text that round-trips the double.
std::string format_real(double value);

// Built-in benchmark objective.

/// Per-dimension optimum of the mixed sphere. Numeric dimensions use `target`,
/// categorical dimensions use `penalties` (one entry per choice).
struct SphereDim {
  double target = 0.0;
  std::vector<double> penalties;
};

/// Midpoint targets (rounded for integers) and |index - middle| penalties.
std::vector<SphereDim> default_sphere_targets(const SearchSpace& space);

/// Default targets overridden by optional "target" / "penalties" fields of the
/// space-file entries.
std::vector<SphereDim> sphere_targets_from_json(const SearchSpace& space,
                                                const nlohmann::json& raw_space);

/// sum (x - c)^2 over continuous dims + sum |n - n*| over integer dims +
/// sum penalty[choice] over categorical dims.
ObjectiveHandle builtin_mixed_sphere(const SearchSpace& space, std::vector<SphereDim> targets);

}  // namespace hypabc
