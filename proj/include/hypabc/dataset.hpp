#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hypabc {

/// Row-major feature matrix with binary labels.
struct Dataset {
  std::size_t n_samples = 0;
  std::size_t n_features = 0;
  std::vector<double> features;
  std::vector<int> labels;
  std::uint64_t seed = 0;

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * n_features, n_features};
  }
};

/// Two Gaussian blobs whose means lie `class_separation` standard deviations
/// apart (split evenly across features), exactly balanced labels, and every
/// feature standardized to zero mean and unit variance.
Dataset generate_dataset(std::uint64_t seed, std::size_t n_samples = 300,
                         std::size_t n_features = 5, double class_separation = 1.0);

/// Stratified fold id per sample. Each class is shuffled with `seed` then dealt
/// round-robin, continuing the counter across classes so fold sizes differ by
/// at most one.
std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k,
                                          std::uint64_t seed);

/// Trains on `train` and predicts a label for every index in `test`.
using FoldModel = std::function<std::vector<int>(
    const Dataset&, std::span<const std::size_t> train, std::span<const std::size_t> test)>;

/// Mean validation accuracy over k stratified folds. Folds are evaluated
/// concurrently when `parallel` is set.
double kfold_cv(const FoldModel& model, const Dataset& data, std::size_t k,
                std::uint64_t fold_seed, bool parallel = true);

}  // namespace hypabc
