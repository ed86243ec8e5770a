#pragma once

/// @file oracle.hpp
/// Exhaustive enumeration of small discrete spaces. Ground truth for the
/// optimizer tests; shares no search code with the colony or the baselines.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypabc/objective.hpp"
#include "hypabc/space.hpp"

namespace hypabc {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Explicit value lists for continuous dimensions, by name.
using Discretization = std::map<std::string, std::vector<double>>;

/// Random-access view of every point of an enumerable space in lexicographic
/// order (first dimension most significant).
class Enumerator {
 public:
  Enumerator(const SearchSpace& space, const Discretization& discretization = {},
             std::size_t cap = kDefaultEnumerationCap);

  std::size_t size() const { return size_; }
  Configuration at(std::size_t index) const;

 private:
  std::vector<std::vector<double>> values_;
  std::size_t size_ = 1;
};

/// Materializes the whole enumeration.
std::vector<Configuration> enumerate(const SearchSpace& space,
                                     const Discretization& discretization = {},
                                     std::size_t cap = kDefaultEnumerationCap);

struct OracleResult {
  Configuration best;
  double value = 0.0;
  std::size_t points = 0;
};

/// Global minimum; ties go to the first point in lexicographic order.
/// The OpenMP version evaluates points concurrently then reduces serially.
OracleResult exhaustive_min(const SearchSpace& space, const ObjectiveHandle& objective,
                            const Discretization& discretization = {},
                            std::size_t cap = kDefaultEnumerationCap);
OracleResult exhaustive_min_serial(const SearchSpace& space, const ObjectiveHandle& objective,
                                   const Discretization& discretization = {},
                                   std::size_t cap = kDefaultEnumerationCap);

/// 64-bit FNV-1a of the canonical space document, as 16 hex digits.
std::string space_hash(const SearchSpace& space);

struct OracleFixture {
  std::string space_hash;
  std::uint64_t seed = 0;
  nlohmann::ordered_json best_config;
  double best_value = 0.0;
};

void write_fixture(const std::filesystem::path& path, const OracleFixture& fixture);
OracleFixture read_fixture(const std::filesystem::path& path);

}  // namespace hypabc
