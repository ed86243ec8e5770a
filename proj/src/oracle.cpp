#include "hypabc/oracle.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>

namespace hypabc {

Enumerator::Enumerator(const SearchSpace& space, const Discretization& discretization,
                       std::size_t cap) {
  for (const auto& [name, values] : discretization) {
    if (space[space.index_of(name)].kind != ParamKind::continuous) {
      throw OracleError("parameter '" + name + "': only continuous dimensions take a discretization");
    }
  }
  for (const auto& p : space.params()) {
    std::vector<double> axis;
    if (p.kind == ParamKind::continuous) {
      const auto it = discretization.find(p.name);
      if (it == discretization.end() || it->second.empty()) {
        throw OracleError("parameter '" + p.name +
                          "': continuous dimension cannot be enumerated without a discretization");
      }
      axis = it->second;
      for (double v : axis) {
        const double r = repair(SearchSpace({p}), std::vector<double>{v}).values[0];
        if (r != v) throw OracleError("parameter '" + p.name + "': discretization value out of range");
      }
    } else {
      const auto lo = static_cast<long long>(p.effective_lower());
      const auto hi = static_cast<long long>(p.effective_upper());
      for (long long v = lo; v <= hi; ++v) axis.push_back(static_cast<double>(v));
    }
    if (size_ > cap / axis.size()) {
      throw OracleError("enumeration exceeds the cap of " + std::to_string(cap) + " points");
    }
    size_ *= axis.size();
    values_.push_back(std::move(axis));
  }
  if (size_ > cap) {
    throw OracleError("enumeration exceeds the cap of " + std::to_string(cap) + " points");
  }
}

Configuration Enumerator::at(std::size_t index) const {
  Configuration c;
  c.values.resize(values_.size());
  for (std::size_t j = values_.size(); j-- > 0;) {
    c.values[j] = values_[j][index % values_[j].size()];
    index /= values_[j].size();
  }
  return c;
}

std::vector<Configuration> enumerate(const SearchSpace& space,
                                     const Discretization& discretization, std::size_t cap) {
  const Enumerator e(space, discretization, cap);
  std::vector<Configuration> out;
  out.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) out.push_back(e.at(i));
  return out;
}

OracleResult exhaustive_min_serial(const SearchSpace& space, const ObjectiveHandle& objective,
                                   const Discretization& discretization, std::size_t cap) {
  const Enumerator e(space, discretization, cap);
  OracleResult best;
  best.points = e.size();
  for (std::size_t i = 0; i < e.size(); ++i) {
    auto c = e.at(i);
    const double v = objective.evaluate(decode(space, c));
    if (i == 0 || v < best.value) {
      best.best = std::move(c);
      best.value = v;
    }
  }
  return best;
}

OracleResult exhaustive_min(const SearchSpace& space, const ObjectiveHandle& objective,
                            const Discretization& discretization, std::size_t cap) {
  const Enumerator e(space, discretization, cap);
  const auto n = static_cast<std::ptrdiff_t>(e.size());
  std::vector<double> values(e.size());
  std::vector<std::exception_ptr> errors(e.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      values[i] = objective.evaluate(decode(space, e.at(static_cast<std::size_t>(i))));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  std::size_t arg = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[arg]) arg = i;
  }
  return {e.at(arg), values[arg], e.size()};
}

std::string space_hash(const SearchSpace& space) {
  const std::string text = space_to_json(space).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_fixture(const std::filesystem::path& path, const OracleFixture& fixture) {
  nlohmann::ordered_json doc;
  doc["space_hash"] = fixture.space_hash;
  doc["seed"] = fixture.seed;
  doc["best_config"] = fixture.best_config;
  doc["best_value"] = fixture.best_value;
  std::ofstream out(path);
  if (!out) throw OracleError("cannot write fixture " + path.string());
  out << doc.dump(2) << '\n';
}

OracleFixture read_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw OracleError("cannot read fixture " + path.string());
  const auto doc = nlohmann::ordered_json::parse(in);
  OracleFixture f;
  f.space_hash = doc.at("space_hash").get<std::string>();
  f.seed = doc.at("seed").get<std::uint64_t>();
  f.best_config = doc.at("best_config");
  f.best_value = doc.at("best_value").get<double>();
  return f;
}

}  // namespace hypabc
