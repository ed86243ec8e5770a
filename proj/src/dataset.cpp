#include "hypabc/dataset.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>

#include "hypabc/rng.hpp"

namespace hypabc {

namespace {

// Box-Muller on the portable uniform stream; std::normal_distribution output
// differs between standard libraries and the dataset backs checked-in fixtures.
double standard_normal(Rng& rng) {
  const double u1 = 1.0 - rng.uniform01() * (1.0 - 1e-16);
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

Dataset generate_dataset(std::uint64_t seed, std::size_t n_samples, std::size_t n_features,
                         double class_separation) {
  if (n_samples == 0 || n_samples % 2 != 0) {
    throw std::invalid_argument("generate_dataset: n_samples must be even and positive");
  }
  if (n_features == 0) throw std::invalid_argument("generate_dataset: n_features must be positive");

  Dataset d;
  d.n_samples = n_samples;
  d.n_features = n_features;
  d.seed = seed;
  d.features.resize(n_samples * n_features);
  d.labels.resize(n_samples);

  Rng rng(seed);
  const double offset = class_separation / (2.0 * std::sqrt(static_cast<double>(n_features)));
  for (std::size_t i = 0; i < n_samples; ++i) {
    const int label = static_cast<int>(i % 2);
    d.labels[i] = label;
    const double mean = label == 1 ? offset : -offset;
    for (std::size_t f = 0; f < n_features; ++f) {
      d.features[i * n_features + f] = mean + standard_normal(rng);
    }
  }

  for (std::size_t f = 0; f < n_features; ++f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) sum += d.features[i * n_features + f];
    const double mean = sum / static_cast<double>(n_samples);
    double sq = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double c = d.features[i * n_features + f] - mean;
      sq += c * c;
    }
    const double sd = std::sqrt(sq / static_cast<double>(n_samples));
    for (std::size_t i = 0; i < n_samples; ++i) {
      auto& x = d.features[i * n_features + f];
      x = (x - mean) / sd;
    }
  }
  return d;
}

std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k,
                                          std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k-fold CV needs k >= 2");
  if (k > labels.size()) throw std::invalid_argument("k-fold CV: k exceeds the number of samples");

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw std::invalid_argument("labels must be 0 or 1");
    by_class[labels[i]].push_back(i);
  }
  Rng rng(seed);
  std::vector<std::size_t> fold(labels.size());
  std::size_t counter = 0;
  for (auto& members : by_class) {
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.index(i)]);
    }
    for (std::size_t idx : members) fold[idx] = counter++ % k;
  }
  return fold;
}

double kfold_cv(const FoldModel& model, const Dataset& data, std::size_t k,
                std::uint64_t fold_seed, bool parallel) {
  const auto fold = stratified_folds(data.labels, k, fold_seed);
  std::vector<double> accuracy(k, 0.0);
  std::vector<std::exception_ptr> errors(k);

#pragma omp parallel for if (parallel) schedule(static)
  for (std::size_t f = 0; f < k; ++f) {
    try {
      std::vector<std::size_t> train;
      std::vector<std::size_t> test;
      for (std::size_t i = 0; i < data.n_samples; ++i) {
        (fold[i] == f ? test : train).push_back(i);
      }
      const auto predicted = model(data, train, test);
      std::size_t correct = 0;
      for (std::size_t t = 0; t < test.size(); ++t) {
        if (predicted[t] == data.labels[test[t]]) ++correct;
      }
      accuracy[f] = static_cast<double>(correct) / static_cast<double>(test.size());
    } catch (...) {
      errors[f] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  double sum = 0.0;
  for (double a : accuracy) sum += a;
  return sum / static_cast<double>(k);
}

}  // namespace hypabc
