#include "hypabc/knn.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace hypabc {

namespace {

struct Neighbor {
  double dist;  // sum |x - y|^p, i.e. the p-th power of the Minkowski distance
  std::size_t index;
};

double powered_distance(std::span<const double> a, std::span<const double> b, double p) {
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t f = 0; f < a.size(); ++f) s += std::abs(a[f] - b[f]);
  } else if (p == 2.0) {
    for (std::size_t f = 0; f < a.size(); ++f) {
      const double d = a[f] - b[f];
      s += d * d;
    }
  } else {
    for (std::size_t f = 0; f < a.size(); ++f) s += std::pow(std::abs(a[f] - b[f]), p);
  }
  return s;
}

void check_params(const KnnParams& params, std::size_t n_train) {
  if (params.k == 0) throw std::invalid_argument("knn: k must be positive");
  if (!(params.p >= 1.0)) throw std::invalid_argument("knn: Minkowski exponent must be >= 1");
  if (n_train == 0) throw std::invalid_argument("knn: empty training set");
}

int predict_one(const Dataset& data, std::span<const std::size_t> train, std::size_t query,
                const KnnParams& params, std::vector<Neighbor>& scratch) {
  scratch.clear();
  const auto q = data.row(query);
  for (std::size_t t : train) scratch.push_back({powered_distance(q, data.row(t), params.p), t});

  const std::size_t k = std::min(params.k, scratch.size());
  auto closer = [](const Neighbor& a, const Neighbor& b) {
    return a.dist < b.dist || (a.dist == b.dist && a.index < b.index);
  };
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k),
                    scratch.end(), closer);

  double votes[2] = {0.0, 0.0};
  if (params.distance_weighted) {
    const bool exact = scratch.front().dist == 0.0;
    for (std::size_t n = 0; n < k; ++n) {
      const auto& nb = scratch[n];
      if (exact) {
        if (nb.dist == 0.0) votes[data.labels[nb.index]] += 1.0;
      } else {
        votes[data.labels[nb.index]] += 1.0 / std::pow(nb.dist, 1.0 / params.p);
      }
    }
  } else {
    for (std::size_t n = 0; n < k; ++n) votes[data.labels[scratch[n].index]] += 1.0;
  }
  if (votes[0] == votes[1]) return data.labels[scratch.front().index];
  return votes[1] > votes[0] ? 1 : 0;
}

}  // namespace

std::vector<int> knn_predict_serial(const Dataset& data, std::span<const std::size_t> train,
                                    std::span<const std::size_t> test, const KnnParams& params) {
  check_params(params, train.size());
  std::vector<int> out(test.size());
  std::vector<Neighbor> scratch;
  scratch.reserve(train.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    out[i] = predict_one(data, train, test[i], params, scratch);
  }
  return out;
}

std::vector<int> knn_predict_omp(const Dataset& data, std::span<const std::size_t> train,
                                 std::span<const std::size_t> test, const KnnParams& params) {
  check_params(params, train.size());
  std::vector<int> out(test.size());
  const auto n = static_cast<std::ptrdiff_t>(test.size());
#pragma omp parallel
  {
    std::vector<Neighbor> scratch;
    scratch.reserve(train.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] =
          predict_one(data, train, test[static_cast<std::size_t>(i)], params, scratch);
    }
  }
  return out;
}

SearchSpace knn_space() {
  std::vector<ParamSpec> params(3);
  params[0].name = "k";
  params[0].kind = ParamKind::integer;
  params[0].lower = 1;
  params[0].upper = 25;
  params[1].name = "weighting";
  params[1].kind = ParamKind::categorical;
  params[1].choices = {"uniform", "distance"};
  params[2].name = "p";
  params[2].kind = ParamKind::continuous;
  params[2].lower = 1.0;
  params[2].upper = 3.0;
  return SearchSpace(std::move(params));
}

ObjectiveHandle builtin_knn_cv(const KnnSurrogateOptions& options) {
  auto data = std::make_shared<const Dataset>(generate_dataset(
      options.data_seed, options.n_samples, options.n_features, options.class_separation));
  ObjectiveHandle h;
  h.description = "knn_cv";
  h.deterministic = true;
  h.evaluate = [data, options](const Assignment& a) {
    KnnParams params;
    params.k = static_cast<std::size_t>(a.number("k"));
    params.distance_weighted = a.label("weighting") == "distance";
    params.p = a.number("p");
    const FoldModel model = [&params](const Dataset& d, std::span<const std::size_t> train,
                                      std::span<const std::size_t> test) {
      return knn_predict_serial(d, train, test, params);
    };
    return 1.0 - kfold_cv(model, *data, options.folds, options.fold_seed, options.parallel_folds);
  };
  return h;
}

}  // namespace hypabc
