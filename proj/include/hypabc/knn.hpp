#pragma once

/// @file knn.hpp
/// k-nearest-neighbor classifier used as the mixed-type ML surrogate objective.
/// Two prediction kernels share one contract: a serial reference and an
/// OpenMP version parallel over test points. Both must return identical labels.

#include <cstdint>
#include <span>
#include <vector>

#include "hypabc/dataset.hpp"
#include "hypabc/objective.hpp"
#include "hypabc/space.hpp"

namespace hypabc {

struct KnnParams {
  std::size_t k = 1;
  bool distance_weighted = false;
  double p = 2.0;  // Minkowski exponent, >= 1
};

/// Neighbors are ordered by (distance, training index). With distance
/// weighting, exact matches (distance 0) take all the weight. Vote ties go to
/// the label of the nearest neighbor. k is capped at the training-set size.
std::vector<int> knn_predict_serial(const Dataset& data, std::span<const std::size_t> train,
                                    std::span<const std::size_t> test, const KnnParams& params);
std::vector<int> knn_predict_omp(const Dataset& data, std::span<const std::size_t> train,
                                 std::span<const std::size_t> test, const KnnParams& params);

struct KnnSurrogateOptions {
  std::uint64_t data_seed = 2021;
  std::size_t n_samples = 300;
  std::size_t n_features = 5;
  double class_separation = 2.0;
  std::size_t folds = 3;
  std::uint64_t fold_seed = 7;
  bool parallel_folds = true;
};

/// The bundled surrogate space: k integer [1,25], weighting {uniform,distance},
/// p continuous [1,3].
SearchSpace knn_space();

/// 1 - mean k-fold CV accuracy of kNN on the synthetic dataset.
ObjectiveHandle builtin_knn_cv(const KnnSurrogateOptions& options = {});

}  // namespace hypabc
