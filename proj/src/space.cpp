#include "hypabc/space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hypabc {

namespace {

[[noreturn]] void fail(const std::string& param, const std::string& what) {
  throw SpaceError("parameter '" + param + "': " + what);
}

ParamKind parse_kind(const std::string& name, const std::string& text) {
  if (text == "integer") return ParamKind::integer;
  if (text == "continuous") return ParamKind::continuous;
  if (text == "categorical") return ParamKind::categorical;
  fail(name, "unknown kind '" + text + "'");
}

void check_param(const ParamSpec& p) {
  if (p.name.empty()) throw SpaceError("parameter with empty name");
  if (p.kind == ParamKind::categorical) {
    if (p.choices.empty()) fail(p.name, "empty choices");
    std::set<std::string> seen;
    for (const auto& c : p.choices) {
      if (!seen.insert(c).second) fail(p.name, "duplicate choice '" + c + "'");
    }
    if (p.lower_exclusive) fail(p.name, "lower_exclusive is only valid for continuous kinds");
    return;
  }
  if (!std::isfinite(p.lower) || !std::isfinite(p.upper)) fail(p.name, "non-finite bounds");
  if (p.lower == p.upper) fail(p.name, "degenerate bounds");
  if (p.lower > p.upper) fail(p.name, "lower bound exceeds upper bound");
  if (p.kind == ParamKind::integer) {
    if (std::trunc(p.lower) != p.lower || std::trunc(p.upper) != p.upper) {
      fail(p.name, "integer kind requires whole-number bounds");
    }
    if (p.lower_exclusive) fail(p.name, "lower_exclusive is only valid for continuous kinds");
  }
  if (p.lower_exclusive && p.lower + kExclusiveLowerEpsilon > p.upper) {
    fail(p.name, "exclusive lower bound leaves an empty range");
  }
}

double round_half_away(double x) { return std::round(x) + 0.0; }

}  // namespace

std::string to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::integer:
      return "integer";
    case ParamKind::continuous:
      return "continuous";
    case ParamKind::categorical:
      return "categorical";
  }
  return "unknown";
}

double ParamSpec::effective_lower() const {
  if (kind == ParamKind::categorical) return 0.0;
  return lower_exclusive ? lower + kExclusiveLowerEpsilon : lower;
}

double ParamSpec::effective_upper() const {
  if (kind == ParamKind::categorical) return static_cast<double>(choices.size() - 1);
  return upper;
}

SearchSpace::SearchSpace(std::vector<ParamSpec> params) : params_(std::move(params)) {
  if (params_.empty()) throw SpaceError("search space must have at least one parameter");
  std::set<std::string> names;
  for (auto& p : params_) {
    check_param(p);
    if (!names.insert(p.name).second) fail(p.name, "duplicate parameter name");
    if (p.kind == ParamKind::categorical) {
      p.lower = 0.0;
      p.upper = static_cast<double>(p.choices.size() - 1);
    }
  }
}

std::size_t SearchSpace::index_of(const std::string& name) const {
  for (std::size_t j = 0; j < params_.size(); ++j) {
    if (params_[j].name == name) return j;
  }
  throw SpaceError("unknown parameter '" + name + "'");
}

const ParamValue& Assignment::at(const std::string& name) const {
  for (const auto& [key, value] : entries) {
    if (key == name) return value;
  }
  throw SpaceError("assignment has no parameter '" + name + "'");
}

double Assignment::number(const std::string& name) const {
  const auto& v = at(name);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw SpaceError("parameter '" + name + "' is categorical, not numeric");
}

const std::string& Assignment::label(const std::string& name) const {
  const auto& v = at(name);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw SpaceError("parameter '" + name + "' is numeric, not categorical");
}

nlohmann::ordered_json Assignment::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [key, value] : entries) {
    std::visit([&](const auto& v) { out[key] = v; }, value);
  }
  return out;
}

SearchSpace validate_space(const nlohmann::json& raw) {
  if (!raw.is_array()) throw SpaceError("space document must be an array of parameters");
  std::vector<ParamSpec> params;
  for (const auto& item : raw) {
    if (!item.is_object()) throw SpaceError("space entries must be objects");
    ParamSpec p;
    if (!item.contains("name") || !item["name"].is_string()) {
      throw SpaceError("parameter without a string 'name'");
    }
    p.name = item["name"].get<std::string>();
    if (!item.contains("type") || !item["type"].is_string()) fail(p.name, "missing 'type'");
    p.kind = parse_kind(p.name, item["type"].get<std::string>());
    p.lower_exclusive = item.value("lower_exclusive", false);
    if (p.kind == ParamKind::categorical) {
      if (!item.contains("choices") || !item["choices"].is_array()) fail(p.name, "empty choices");
      for (const auto& c : item["choices"]) {
        if (!c.is_string()) fail(p.name, "choices must be strings");
        p.choices.push_back(c.get<std::string>());
      }
    } else {
      if (!item.contains("min") || !item["min"].is_number() || !item.contains("max") ||
          !item["max"].is_number()) {
        fail(p.name, "numeric kinds need numeric 'min' and 'max'");
      }
      p.lower = item["min"].get<double>();
      p.upper = item["max"].get<double>();
    }
    params.push_back(std::move(p));
  }
  return SearchSpace(std::move(params));
}

SearchSpace load_space_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpaceError("cannot read space file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw SpaceError("malformed space file " + path.string() + ": " + e.what());
  }
  return validate_space(doc);
}

nlohmann::ordered_json space_to_json(const SearchSpace& space) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& p : space.params()) {
    nlohmann::ordered_json item;
    item["name"] = p.name;
    item["type"] = to_string(p.kind);
    if (p.kind == ParamKind::categorical) {
      item["choices"] = p.choices;
    } else {
      item["min"] = p.lower;
      item["max"] = p.upper;
      if (p.lower_exclusive) item["lower_exclusive"] = true;
    }
    out.push_back(std::move(item));
  }
  return out;
}

Configuration repair(const SearchSpace& space, std::span<const double> raw) {
  if (raw.size() != space.dimension()) {
    throw SpaceError("configuration length " + std::to_string(raw.size()) +
                     " does not match space dimension " + std::to_string(space.dimension()));
  }
  Configuration out;
  out.values.resize(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    const auto& p = space[j];
    if (!std::isfinite(raw[j])) fail(p.name, "non-finite value");
    double v = std::clamp(raw[j], p.effective_lower(), p.effective_upper());
    if (p.is_discrete()) v = round_half_away(v);
    out.values[j] = v + 0.0;
  }
  return out;
}

Configuration config_from_unit(const SearchSpace& space, std::span<const double> unit) {
  if (unit.size() != space.dimension()) throw SpaceError("unit draw length mismatch");
  std::vector<double> raw(unit.size());
  for (std::size_t j = 0; j < unit.size(); ++j) {
    const auto& p = space[j];
    raw[j] = p.lower + unit[j] * (p.upper - p.lower);
  }
  return repair(space, raw);
}

Configuration sample_uniform(const SearchSpace& space, Rng& rng) {
  std::vector<double> unit(space.dimension());
  for (auto& u : unit) u = rng.uniform01();
  return config_from_unit(space, unit);
}

Configuration neighbor(const SearchSpace& space, const Configuration& current,
                       const Configuration& other, std::size_t dim, double phi) {
  if (dim >= space.dimension()) throw SpaceError("neighbor dimension out of range");
  std::vector<double> raw = current.values;
  raw[dim] = current.values[dim] + phi * (current.values[dim] - other.values[dim]);
  return repair(space, raw);
}

Configuration flip_binary(const SearchSpace& space, const Configuration& current,
                          std::size_t dim) {
  if (dim >= space.dimension() || !space[dim].is_binary_categorical()) {
    throw SpaceError("flip_binary requires a binary categorical dimension");
  }
  Configuration out = current;
  out.values[dim] = static_cast<double>(static_cast<int>(current.values[dim]) ^ 1);
  return out;
}

bool is_repaired(const SearchSpace& space, const Configuration& config) {
  if (config.values.size() != space.dimension()) return false;
  for (double v : config.values) {
    if (!std::isfinite(v)) return false;
  }
  return repair(space, config.values) == config;
}

Assignment decode(const SearchSpace& space, const Configuration& config) {
  if (config.values.size() != space.dimension()) throw SpaceError("decode: length mismatch");
  Assignment out;
  out.entries.reserve(space.dimension());
  for (std::size_t j = 0; j < space.dimension(); ++j) {
    const auto& p = space[j];
    const double v = config.values[j];
    switch (p.kind) {
      case ParamKind::integer:
        out.entries.emplace_back(p.name, static_cast<std::int64_t>(v));
        break;
      case ParamKind::continuous:
        out.entries.emplace_back(p.name, v);
        break;
      case ParamKind::categorical:
        out.entries.emplace_back(p.name, p.choices.at(static_cast<std::size_t>(v)));
        break;
    }
  }
  return out;
}

Configuration encode(const SearchSpace& space, const Assignment& assignment) {
  std::vector<double> raw(space.dimension());
  for (std::size_t j = 0; j < space.dimension(); ++j) {
    const auto& p = space[j];
    if (p.kind == ParamKind::categorical) {
      const auto& name = assignment.label(p.name);
      const auto it = std::find(p.choices.begin(), p.choices.end(), name);
      if (it == p.choices.end()) fail(p.name, "unknown choice '" + name + "'");
      raw[j] = static_cast<double>(it - p.choices.begin());
    } else {
      raw[j] = assignment.number(p.name);
    }
  }
  return repair(space, raw);
}

}  // namespace hypabc
