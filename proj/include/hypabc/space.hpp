#pragma once

/// @file space.hpp
/// Mixed-type search spaces and the type-aware moves used by the colony.
///
/// A configuration is stored as a vector of reals, one per dimension.
/// Integer dimensions hold whole-valued reals, categorical dimensions hold the
/// index of the chosen label. Every stored configuration is a fixed point of
/// repair(), so equality of configurations is plain element-wise equality.

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hypabc/rng.hpp"

namespace hypabc {

/// Offset applied to exclusive lower bounds, "(0, 1]" becomes [1e-6, 1].
inline constexpr double kExclusiveLowerEpsilon = 1e-6;

class SpaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParamKind { integer, continuous, categorical };

std::string to_string(ParamKind kind);

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::continuous;
  double lower = 0.0;
  double upper = 1.0;
  std::vector<std::string> choices;
  bool lower_exclusive = false;

  /// Lowest admissible stored value (encoded index 0 for categoricals).
  double effective_lower() const;
  /// Highest admissible stored value (last index for categoricals).
  double effective_upper() const;
  bool is_discrete() const { return kind != ParamKind::continuous; }
  bool is_binary_categorical() const {
    return kind == ParamKind::categorical && choices.size() == 2;
  }
};

class SearchSpace {
 public:
  SearchSpace() = default;
  /// Validates every invariant; throws SpaceError naming the offending parameter.
  explicit SearchSpace(std::vector<ParamSpec> params);

  std::size_t dimension() const { return params_.size(); }
  const std::vector<ParamSpec>& params() const { return params_; }
  const ParamSpec& operator[](std::size_t j) const { return params_[j]; }
  /// Index of the named parameter; throws SpaceError if absent.
  std::size_t index_of(const std::string& name) const;

 private:
  std::vector<ParamSpec> params_;
};

struct Configuration {
  std::vector<double> values;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

using ParamValue = std::variant<std::int64_t, double, std::string>;

/// Decoded, human-facing view of a configuration: name -> typed value, in
/// space order.
struct Assignment {
  std::vector<std::pair<std::string, ParamValue>> entries;

  const ParamValue& at(const std::string& name) const;
  double number(const std::string& name) const;
  const std::string& label(const std::string& name) const;
  nlohmann::ordered_json to_json() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Builds a SearchSpace from the space-file document (an array of parameter
/// objects with name, type, min, max, lower_exclusive, choices).
SearchSpace validate_space(const nlohmann::json& raw);
SearchSpace load_space_file(const std::filesystem::path& path);
nlohmann::ordered_json space_to_json(const SearchSpace& space);

/// Clamp into bounds then round discrete dimensions half away from zero.
Configuration repair(const SearchSpace& space, std::span<const double> raw);

/// Maps unit draws u_j in [0,1] to lower_j + u_j (upper_j - lower_j), repaired.
Configuration config_from_unit(const SearchSpace& space, std::span<const double> unit);
Configuration sample_uniform(const SearchSpace& space, Rng& rng);

/// Single-dimension move x_ij + phi (x_ij - x_kj), repaired.
Configuration neighbor(const SearchSpace& space, const Configuration& current,
                       const Configuration& other, std::size_t dim, double phi);

/// XOR flip of a binary categorical dimension.
Configuration flip_binary(const SearchSpace& space, const Configuration& current,
                          std::size_t dim);

bool is_repaired(const SearchSpace& space, const Configuration& config);

Assignment decode(const SearchSpace& space, const Configuration& config);
Configuration encode(const SearchSpace& space, const Assignment& assignment);

}  // namespace hypabc
