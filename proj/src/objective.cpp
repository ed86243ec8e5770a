#include "hypabc/objective.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <unordered_map>

#include <omp.h>

namespace hypabc {

namespace {

using Clock = std::chrono::steady_clock;

double timed_call(const ObjectiveHandle& handle, const SearchSpace& space,
                  const Configuration& config, double& elapsed_ms) {
  const auto assignment = decode(space, config);
  const auto start = Clock::now();
  double value = 0.0;
  try {
    value = handle.evaluate(assignment);
  } catch (const std::exception& e) {
    throw ObjectiveError(std::string("objective failed for ") + assignment.to_json().dump() +
                         ": " + e.what());
  }
  elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (std::isnan(value)) {
    throw ObjectiveError("objective returned NaN for " + assignment.to_json().dump());
  }
  return value;
}

struct BatchPlan {
  // Per request: index into `fresh` for fresh/duplicate requests, or -1 for a
  // cache hit whose value is already known.
  std::vector<std::ptrdiff_t> fresh_slot;
  std::vector<std::optional<double>> cached;
  std::vector<std::size_t> fresh;  // request indices that need evaluation
  std::size_t planned = 0;         // requests before the cut
};

BatchPlan plan_batch(const EvalCache& cache, std::span<const Configuration> configs,
                     std::size_t max_fresh) {
  BatchPlan plan;
  plan.fresh_slot.assign(configs.size(), -1);
  plan.cached.resize(configs.size());
  std::map<EvalCache::Key, std::size_t> first_seen;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (auto v = cache.lookup(configs[i])) {
      plan.cached[i] = v;
    } else {
      auto key = EvalCache::key_of(configs[i]);
      auto it = first_seen.find(key);
      if (it != first_seen.end()) {
        plan.fresh_slot[i] = static_cast<std::ptrdiff_t>(it->second);
      } else {
        if (plan.fresh.size() >= max_fresh) break;
        first_seen.emplace(std::move(key), plan.fresh.size());
        plan.fresh_slot[i] = static_cast<std::ptrdiff_t>(plan.fresh.size());
        plan.fresh.push_back(i);
      }
    }
    plan.planned = i + 1;
  }
  return plan;
}

std::vector<BatchItem> apply_batch(EvalCache& cache, std::span<const Configuration> configs,
                                   const BatchPlan& plan, std::span<const double> values,
                                   std::span<const double> elapsed) {
  std::vector<BatchItem> out(configs.size());
  std::vector<bool> inserted(plan.fresh.size(), false);
  for (std::size_t i = 0; i < plan.planned; ++i) {
    auto& item = out[i];
    item.evaluated = true;
    if (plan.cached[i]) {
      item.result = {*plan.cached[i], true, 0.0};
      cache.count_hit();
      continue;
    }
    const auto slot = static_cast<std::size_t>(plan.fresh_slot[i]);
    if (!inserted[slot]) {
      inserted[slot] = true;
      cache.insert(configs[i], values[slot]);
      cache.count_miss();
      item.result = {values[slot], false, elapsed[slot]};
    } else {
      cache.count_hit();
      item.result = {values[slot], true, 0.0};
    }
  }
  return out;
}

}  // namespace

EvalCache::Key EvalCache::key_of(const Configuration& config) {
  Key key(config.values.size());
  for (std::size_t j = 0; j < key.size(); ++j) {
    key[j] = std::bit_cast<std::uint64_t>(config.values[j] + 0.0);
  }
  return key;
}

std::optional<double> EvalCache::lookup(const Configuration& config) const {
  const auto key = key_of(config);
  std::shared_lock lock(mutex_);
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

bool EvalCache::insert(const Configuration& config, double value) {
  auto key = key_of(config);
  std::unique_lock lock(mutex_);
  return values_.emplace(std::move(key), value).second;
}

std::size_t EvalCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

CachedValue cached_evaluate(EvalCache& cache, const ObjectiveHandle& handle,
                            const Configuration& config, const SearchSpace& space) {
  if (auto v = cache.lookup(config)) {
    cache.count_hit();
    return {*v, true, 0.0};
  }
  double elapsed = 0.0;
  const double value = timed_call(handle, space, config, elapsed);
  if (!cache.insert(config, value)) {
    // Another writer got there first; keep the stored value.
    cache.count_hit();
    return {*cache.lookup(config), true, 0.0};
  }
  cache.count_miss();
  return {value, false, elapsed};
}

std::vector<BatchItem> evaluate_batch_serial(EvalCache& cache, const ObjectiveHandle& handle,
                                             const SearchSpace& space,
                                             std::span<const Configuration> configs,
                                             std::size_t max_fresh) {
  const auto plan = plan_batch(cache, configs, max_fresh);
  std::vector<double> values(plan.fresh.size());
  std::vector<double> elapsed(plan.fresh.size());
  for (std::size_t s = 0; s < plan.fresh.size(); ++s) {
    values[s] = timed_call(handle, space, configs[plan.fresh[s]], elapsed[s]);
  }
  return apply_batch(cache, configs, plan, values, elapsed);
}

std::vector<BatchItem> evaluate_batch(EvalCache& cache, const ObjectiveHandle& handle,
                                      const SearchSpace& space,
                                      std::span<const Configuration> configs,
                                      std::size_t max_fresh, int width) {
  if (width <= 1) return evaluate_batch_serial(cache, handle, space, configs, max_fresh);

  const auto plan = plan_batch(cache, configs, max_fresh);
  const auto n = static_cast<std::ptrdiff_t>(plan.fresh.size());
  std::vector<double> values(plan.fresh.size());
  std::vector<double> elapsed(plan.fresh.size());
  std::vector<std::exception_ptr> errors(plan.fresh.size());

#pragma omp parallel for num_threads(width) schedule(dynamic, 1)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    try {
      values[s] = timed_call(handle, space, configs[plan.fresh[s]], elapsed[s]);
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return apply_batch(cache, configs, plan, values, elapsed);
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::init:
      return "init";
    case Phase::employed:
      return "employed";
    case Phase::onlooker:
      return "onlooker";
    case Phase::scout:
      return "scout";
    case Phase::baseline:
      return "baseline";
  }
  return "unknown";
}

const EvalRecord& EvalLog::append(std::size_t cycle, Phase phase, Assignment config,
                                  const CachedValue& value) {
  EvalRecord rec;
  rec.eval_index = records_.size();
  rec.cycle = cycle;
  rec.phase = phase;
  rec.config = std::move(config);
  rec.objective = value.value;
  rec.best_so_far = records_.empty() ? value.value
                                     : std::min(records_.back().best_so_far, value.value);
  rec.cache_hit = value.was_hit;
  rec.elapsed_ms = value.elapsed_ms;
  records_.push_back(std::move(rec));
  if (observer_) observer_(records_.back());
  return records_.back();
}

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_log_csv(std::ostream& out, std::span<const EvalRecord> records, bool with_timing) {
  out << kLogCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.eval_index << ',' << r.cycle << ',' << to_string(r.phase) << ','
        << format_real(r.objective) << ',' << format_real(r.best_so_far) << ','
        << (r.cache_hit ? 1 : 0) << ',' << format_real(with_timing ? r.elapsed_ms : 0.0) << ','
        << csv_quote(r.config.to_json().dump()) << '\n';
  }
}

nlohmann::ordered_json log_to_json(std::span<const EvalRecord> records, bool with_timing) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json row;
    row["eval_index"] = r.eval_index;
    row["cycle"] = r.cycle;
    row["phase"] = to_string(r.phase);
    row["objective"] = r.objective;
    row["best_so_far"] = r.best_so_far;
    row["cache_hit"] = r.cache_hit;
    row["elapsed_ms"] = with_timing ? r.elapsed_ms : 0.0;
    row["config"] = r.config.to_json();
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<SphereDim> default_sphere_targets(const SearchSpace& space) {
  std::vector<SphereDim> out(space.dimension());
  for (std::size_t j = 0; j < space.dimension(); ++j) {
    const auto& p = space[j];
    if (p.kind == ParamKind::categorical) {
      const double middle = std::round((static_cast<double>(p.choices.size()) - 1.0) / 2.0);
      for (std::size_t c = 0; c < p.choices.size(); ++c) {
        out[j].penalties.push_back(std::abs(static_cast<double>(c) - middle));
      }
    } else {
      double mid = 0.5 * (p.lower + p.upper);
      if (p.kind == ParamKind::integer) mid = std::round(mid);
      out[j].target = mid;
    }
  }
  return out;
}

std::vector<SphereDim> sphere_targets_from_json(const SearchSpace& space,
                                                const nlohmann::json& raw_space) {
  auto out = default_sphere_targets(space);
  if (!raw_space.is_array()) return out;
  for (const auto& item : raw_space) {
    if (!item.is_object() || !item.contains("name")) continue;
    const auto j = space.index_of(item["name"].get<std::string>());
    const auto& p = space[j];
    if (item.contains("target")) {
      if (p.kind == ParamKind::categorical) {
        throw SpaceError("parameter '" + p.name + "': categorical targets use 'penalties'");
      }
      out[j].target = item["target"].get<double>();
    }
    if (item.contains("penalties")) {
      auto pen = item["penalties"].get<std::vector<double>>();
      if (p.kind != ParamKind::categorical || pen.size() != p.choices.size()) {
        throw SpaceError("parameter '" + p.name + "': penalties need one entry per choice");
      }
      out[j].penalties = std::move(pen);
    }
  }
  return out;
}

ObjectiveHandle builtin_mixed_sphere(const SearchSpace& space, std::vector<SphereDim> targets) {
  if (targets.size() != space.dimension()) throw SpaceError("sphere targets length mismatch");
  ObjectiveHandle h;
  h.description = "mixed_sphere";
  h.deterministic = true;
  h.evaluate = [space, targets = std::move(targets)](const Assignment& a) {
    double total = 0.0;
    for (std::size_t j = 0; j < space.dimension(); ++j) {
      const auto& p = space[j];
      switch (p.kind) {
        case ParamKind::continuous: {
          const double d = a.number(p.name) - targets[j].target;
          total += d * d;
          break;
        }
        case ParamKind::integer:
          total += std::abs(a.number(p.name) - targets[j].target);
          break;
        case ParamKind::categorical: {
          const auto& label = a.label(p.name);
          const auto it = std::find(p.choices.begin(), p.choices.end(), label);
          if (it == p.choices.end()) throw SpaceError("unknown choice '" + label + "'");
          total += targets[j].penalties[static_cast<std::size_t>(it - p.choices.begin())];
          break;
        }
      }
    }
    return total;
  };
  return h;
}

}  // namespace hypabc
