// Serial reference vs OpenMP kernels. Prints wall time per kernel and checks
// that both paths agree.
#include <chrono>
#include <cstdio>
#include <numeric>
#include <vector>

#include <omp.h>

#include "hypabc/knn.hpp"
#include "hypabc/objective.hpp"
#include "hypabc/oracle.hpp"

using namespace hypabc;

template <typename F>
double time_ms(F&& f, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
             .count() /
         reps;
}

int main() {
  std::printf("threads available: %d\n", omp_get_max_threads());

  const auto data = generate_dataset(2021, 2000, 5, 1.5);
  std::vector<std::size_t> train(1500);
  std::vector<std::size_t> test(500);
  std::iota(train.begin(), train.end(), 0);
  std::iota(test.begin(), test.end(), 1500);
  const KnnParams params{7, true, 1.5};
  std::vector<int> a;
  std::vector<int> b;
  const double serial = time_ms([&] { a = knn_predict_serial(data, train, test, params); }, 5);
  const double omp = time_ms([&] { b = knn_predict_omp(data, train, test, params); }, 5);
  std::printf("knn_predict   serial %9.3f ms   omp %9.3f ms   agree=%s\n", serial, omp,
              a == b ? "yes" : "NO");

  const auto space = knn_space();
  const auto objective = builtin_knn_cv();
  const Discretization disc{{"p", {1.0, 2.0, 3.0}}};
  OracleResult rs;
  OracleResult ro;
  const double es = time_ms([&] { rs = exhaustive_min_serial(space, objective, disc); }, 1);
  const double eo = time_ms([&] { ro = exhaustive_min(space, objective, disc); }, 1);
  std::printf("exhaustive    serial %9.3f ms   omp %9.3f ms   agree=%s\n", es, eo,
              rs.best == ro.best && rs.value == ro.value ? "yes" : "NO");

  Enumerator e(space, disc);
  std::vector<Configuration> batch;
  for (std::size_t i = 0; i < e.size(); ++i) batch.push_back(e.at(i));
  const int width = omp_get_max_threads();
  std::vector<BatchItem> ss;
  std::vector<BatchItem> so;
  const double bs = time_ms(
      [&] {
        EvalCache cache;
        ss = evaluate_batch_serial(cache, objective, space, batch, batch.size());
      },
      1);
  const double bo = time_ms(
      [&] {
        EvalCache cache;
        so = evaluate_batch(cache, objective, space, batch, batch.size(), width);
      },
      1);
  bool batch_agree = ss.size() == so.size();
  for (std::size_t i = 0; batch_agree && i < ss.size(); ++i) {
    batch_agree = ss[i].result.value == so[i].result.value && ss[i].evaluated == so[i].evaluated;
  }
  std::printf("eval_batch    serial %9.3f ms   omp %9.3f ms   agree=%s (width %d)\n", bs, bo,
              batch_agree ? "yes" : "NO", width);
  return a == b && rs.best == ro.best && batch_agree ? 0 : 1;
}
