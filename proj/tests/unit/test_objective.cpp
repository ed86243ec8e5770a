#include <doctest.h>

#include <atomic>
#include <set>
#include <sstream>

#include "hypabc/objective.hpp"
#include "hypabc/oracle.hpp"
#include "support.hpp"

using namespace hypabc;

namespace {

SearchSpace sphere_space() {
  return validate_space(nlohmann::json::parse(R"([
    {"name":"lr","type":"continuous","min":0,"max":1},
    {"name":"depth","type":"integer","min":1,"max":10},
    {"name":"kind","type":"categorical","choices":["a","b","c"]}])"));
}

ObjectiveHandle counting(std::atomic<int>& calls) {
  ObjectiveHandle h;
  h.evaluate = [&calls](const Assignment& a) {
    ++calls;
    return a.number("depth");
  };
  return h;
}

}  // namespace

TEST_CASE("cached_evaluate memoizes exact configurations") {
  const auto space = sphere_space();
  std::atomic<int> calls = 0;
  const auto h = counting(calls);
  EvalCache cache;
  const Configuration c{{0.5, 3, 1}};
  const auto first = cached_evaluate(cache, h, c, space);
  const auto second = cached_evaluate(cache, h, c, space);
  CHECK_FALSE(first.was_hit);
  CHECK(second.was_hit);
  CHECK(first.value == second.value);
  CHECK(calls == 1);

  const Configuration near{{0.5000000000000001, 3, 1}};
  CHECK_FALSE(cached_evaluate(cache, h, near, space).was_hit);
  CHECK(calls == 2);
  CHECK(cache.hits() == 1);
  CHECK(cache.misses() == 2);
}

TEST_CASE("cache over a 20-point discrete space: pigeonhole and counter invariants") {
  const auto space = validate_space(nlohmann::json::parse(R"([
    {"name":"depth","type":"integer","min":1,"max":10},
    {"name":"flag","type":"categorical","choices":["no","yes"]}])"));
  std::atomic<int> calls = 0;
  const auto h = counting(calls);
  EvalCache cache;
  Rng rng(99);
  std::set<std::vector<double>> distinct;
  for (int i = 0; i < 100; ++i) {
    const auto c = sample_uniform(space, rng);
    distinct.insert(c.values);
    cached_evaluate(cache, h, c, space);
  }
  CHECK(cache.hits() >= 80);
  CHECK(cache.misses() == distinct.size());
  CHECK(cache.hits() + cache.misses() == 100);
  CHECK(static_cast<std::size_t>(calls.load()) == distinct.size());
}

TEST_CASE("objective failures carry the configuration") {
  const auto space = sphere_space();
  ObjectiveHandle h;
  h.evaluate = [](const Assignment&) -> double { throw std::runtime_error("boom"); };
  EvalCache cache;
  try {
    cached_evaluate(cache, h, Configuration{{0.25, 4, 2}}, space);
    FAIL("expected ObjectiveError");
  } catch (const ObjectiveError& e) {
    const std::string what = e.what();
    CHECK(what.find("boom") != std::string::npos);
    CHECK(what.find(R"("depth":4)") != std::string::npos);
    CHECK(what.find(R"("kind":"c")") != std::string::npos);
  }
  CHECK(cache.size() == 0);
}

TEST_CASE("evaluate_batch: in-batch duplicates are hits and the budget cuts in order") {
  const auto space = sphere_space();
  std::atomic<int> calls = 0;
  const auto h = counting(calls);
  EvalCache cache;
  cached_evaluate(cache, h, Configuration{{0.0, 1, 0}}, space);

  const std::vector<Configuration> batch = {
      {{0.0, 2, 0}}, {{0.0, 1, 0}}, {{0.0, 2, 0}}, {{0.0, 3, 0}}, {{0.0, 4, 0}}, {{0.0, 1, 0}}};
  const auto items = evaluate_batch_serial(cache, h, space, batch, 2);
  CHECK(items[0].evaluated);
  CHECK_FALSE(items[0].result.was_hit);
  CHECK(items[1].result.was_hit);  // in cache beforehand
  CHECK(items[2].result.was_hit);  // duplicate of items[0]
  CHECK(items[3].evaluated);
  CHECK_FALSE(items[3].result.was_hit);
  CHECK_FALSE(items[4].evaluated);  // third fresh evaluation exceeds max_fresh
  CHECK_FALSE(items[5].evaluated);  // cut applies to everything after
  CHECK(calls == 3);
  CHECK(cache.misses() == 3);
  CHECK(cache.hits() == 2);
}

TEST_CASE("evaluate_batch parallel path matches the serial reference") {
  const auto space = sphere_space();
  const auto h = builtin_mixed_sphere(space, default_sphere_targets(space));
  Rng rng(5);
  std::vector<Configuration> batch;
  for (int i = 0; i < 64; ++i) batch.push_back(sample_uniform(space, rng));
  batch.push_back(batch[3]);
  EvalCache a;
  EvalCache b;
  const auto serial = evaluate_batch_serial(a, h, space, batch, 40);
  const auto parallel = evaluate_batch(b, h, space, batch, 40, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].evaluated == parallel[i].evaluated);
    CHECK(serial[i].result.value == parallel[i].result.value);
    CHECK(serial[i].result.was_hit == parallel[i].result.was_hit);
  }
  CHECK(a.misses() == b.misses());
  CHECK(a.hits() == b.hits());
}

TEST_CASE("EvalLog keeps a monotone running best and the CSV schema") {
  const auto space = sphere_space();
  EvalLog log;
  std::vector<std::size_t> seen;
  EvalLog observed([&seen](const EvalRecord& r) { seen.push_back(r.eval_index); });
  const double values[] = {3.0, 5.0, 1.5, 2.0};
  for (double v : values) {
    const auto a = decode(space, Configuration{{0.5, 2, 0}});
    log.append(1, Phase::employed, a, {v, false, 1.25});
    observed.append(1, Phase::employed, a, {v, false, 1.25});
  }
  CHECK(seen == std::vector<std::size_t>{0, 1, 2, 3});
  std::vector<double> best;
  for (const auto& r : log.records()) best.push_back(r.best_so_far);
  CHECK(best == std::vector<double>{3.0, 3.0, 1.5, 1.5});

  std::ostringstream csv;
  write_log_csv(csv, log.records(), false);
  const auto rows = test::lines(csv.str());
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "eval_index,cycle,phase,objective,best_so_far,cache_hit,elapsed_ms,config_json");
  CHECK(rows[1] == R"(0,1,employed,3,3,0,0,"{""lr"":0.5,""depth"":2,""kind"":""a""}")");

  std::ostringstream timed;
  write_log_csv(timed, log.records(), true);
  CHECK(test::lines(timed.str())[1].find(",1.25,") != std::string::npos);

  const auto mirror = log_to_json(log.records(), false);
  CHECK(mirror.size() == 4);
  CHECK(mirror[2]["best_so_far"] == 1.5);
  CHECK(mirror[0]["config"]["kind"] == "a");
}

TEST_CASE("format_real round-trips") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1.0 / 3.0) == "0.3333333333333333");
  CHECK(std::stod(format_real(0.8928571428571429)) == 0.8928571428571429);
}

TEST_CASE("mixed sphere values") {
  const auto space = sphere_space();
  std::vector<SphereDim> targets(3);
  targets[0].target = 0.25;
  targets[1].target = 4;
  targets[2].penalties = {2.0, 0.0, 1.0};
  const auto h = builtin_mixed_sphere(space, targets);
  CHECK(h.evaluate(decode(space, Configuration{{0.25, 4, 1}})) == 0.0);
  CHECK(h.evaluate(decode(space, Configuration{{0.75, 4, 1}})) == doctest::Approx(0.25));
  CHECK(h.evaluate(decode(space, Configuration{{0.25, 7, 1}})) == 3.0);
  CHECK(h.evaluate(decode(space, Configuration{{0.25, 4, 0}})) == 2.0);
}

TEST_CASE("property: mixed sphere is zero exactly at the target") {
  const auto space = validate_space(test::read_json(test::data_path("spaces/sphere120.json")));
  const auto h = builtin_mixed_sphere(
      space, sphere_targets_from_json(space, test::read_json(test::data_path("spaces/sphere120.json"))));
  const Configuration target{{7, 2, 1}};
  for (const auto& c : enumerate(space)) {
    const double v = h.evaluate(decode(space, c));
    CHECK(v >= 0.0);
    CHECK((v == 0.0) == (c == target));
  }
}

TEST_CASE("default sphere targets") {
  const auto space = load_space_file(test::data_path("spaces/svm.json"));
  const auto t = default_sphere_targets(space);
  CHECK(t[0].target == doctest::Approx(25.05));
  CHECK(t[1].penalties == std::vector<double>{2, 1, 0, 1});
  CHECK_THROWS_AS(sphere_targets_from_json(space, nlohmann::json::parse(
                                                      R"([{"name":"kernel","penalties":[1]}])")),
                  SpaceError);
}
