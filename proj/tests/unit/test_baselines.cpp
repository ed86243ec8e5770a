#include <doctest.h>

#include <set>
#include <sstream>

#include "hypabc/baselines.hpp"
#include "support.hpp"

using namespace hypabc;

namespace {

SearchSpace sphere120() {
  return validate_space(test::read_json(test::data_path("spaces/sphere120.json")));
}

ObjectiveHandle sphere120_objective(const SearchSpace& space) {
  return builtin_mixed_sphere(
      space, sphere_targets_from_json(space, test::read_json(test::data_path("spaces/sphere120.json"))));
}

ParamSpec integer(const std::string& name, double lo, double hi) {
  ParamSpec p;
  p.name = name;
  p.kind = ParamKind::integer;
  p.lower = lo;
  p.upper = hi;
  return p;
}

std::string csv_of(const RunResult& r) {
  std::ostringstream s;
  write_log_csv(s, r.log, false);
  return s.str();
}

}  // namespace

TEST_CASE("grid axis values") {
  CHECK(grid_axis(integer("n", 5, 15), 5.0) == std::vector<double>{5, 10, 15});
  CHECK(grid_axis(integer("n", 5, 17), 5.0) == std::vector<double>{5, 10, 15});
  CHECK(grid_axis(integer("n", 1, 4), std::nullopt) == std::vector<double>{1, 2, 3, 4});

  ParamSpec sub;
  sub.name = "subsample";
  sub.kind = ParamKind::continuous;
  sub.lower = 0.0;
  sub.upper = 1.0;
  sub.lower_exclusive = true;
  const auto axis = grid_axis(sub, 0.25);
  REQUIRE(axis.size() == 4);
  CHECK(axis.front() == 0.25);
  CHECK(axis.back() == 1.0);
  CHECK_THROWS_AS(grid_axis(sub, std::nullopt), GridError);
  CHECK_THROWS_AS(grid_axis(integer("n", 1, 4), 0.0), GridError);

  ParamSpec cat;
  cat.name = "c";
  cat.kind = ParamKind::categorical;
  cat.choices = {"a", "b", "c"};
  CHECK(grid_axis(cat, 7.0) == std::vector<double>{0, 1, 2});
}

TEST_CASE("GridSpec parsing") {
  const auto plain = GridSpec::parse("5");
  CHECK(plain.default_step == 5.0);
  CHECK(plain.steps.empty());
  const auto named = GridSpec::parse("a=0.5,b=2");
  CHECK_FALSE(named.default_step.has_value());
  CHECK(named.steps.at("a") == 0.5);
  CHECK(named.steps.at("b") == 2.0);
  CHECK_THROWS(GridSpec::parse("a=x"));
}

TEST_CASE("RF grid cardinality at step 5") {
  const auto rf = load_space_file(test::data_path("spaces/rf.json"));
  // n_estimators 5..500: 100, criterion: 2, max_depth 5..50: 10,
  // max_features 1..91: 19, min_samples_split 2..27: 6, min_samples_leaf 1,6,11: 3
  CHECK(grid_cardinality(rf, GridSpec::parse("5")) == 100u * 2 * 10 * 19 * 6 * 3);
  CHECK(grid_cardinality(rf, GridSpec{}) == 496u * 2 * 46 * 91 * 29 * 15);
}

TEST_CASE("grid search visits every point once and finds a gridded optimum") {
  const auto space = sphere120();
  const auto r = grid_search(space, GridSpec{}, sphere120_objective(space));
  CHECK(r.grid_cardinality == 120u);
  CHECK(r.evaluations_used == 120);
  CHECK(r.best_objective == 0.0);
  CHECK(r.best.number("x") == 7);
  CHECK(r.best.number("y") == 2);
  CHECK(r.best.label("mode") == "on");
  std::set<std::string> seen;
  for (const auto& rec : r.log) {
    CHECK(rec.phase == Phase::baseline);
    CHECK_FALSE(rec.cache_hit);
    seen.insert(rec.config.to_json().dump());
  }
  CHECK(seen.size() == 120);

  GridOptions parallel;
  parallel.parallel_width = 3;
  CHECK(csv_of(grid_search(space, GridSpec{}, sphere120_objective(space), parallel)) == csv_of(r));
}

TEST_CASE("grid search refuses grids over the cap") {
  const auto rf = load_space_file(test::data_path("spaces/rf.json"));
  GridOptions small;
  small.cap = 1000;
  CHECK_THROWS_AS(grid_search(rf, GridSpec::parse("5"), builtin_mixed_sphere(rf, default_sphere_targets(rf)),
                              small),
                  GridError);
  CHECK_THROWS_AS(grid_search(rf, GridSpec{}, builtin_mixed_sphere(rf, default_sphere_targets(rf))), GridError);
}

TEST_CASE("random search: budget, replay, cache accounting") {
  const auto space = sphere120();
  const auto objective = sphere120_objective(space);
  const auto one = random_search(space, 1, objective, 3);
  CHECK(one.log.size() == 1);
  CHECK(one.evaluations_used == 1);
  CHECK_THROWS(random_search(space, 0, objective, 3));

  const auto a = random_search(space, 300, objective, 11);
  const auto b = random_search(space, 300, objective, 11);
  CHECK(csv_of(a) == csv_of(b));
  CHECK(csv_of(a) != csv_of(random_search(space, 300, objective, 12)));
  CHECK(a.log.size() == 300);
  CHECK(a.evaluations_used <= 120);
  CHECK(a.cache_hits + a.cache_misses == 300);
  CHECK(a.evaluations_used == a.cache_misses);

  RandomSearchOptions wide;
  wide.parallel_width = 4;
  CHECK(csv_of(random_search(space, 300, objective, 11, wide)) == csv_of(a));
}

TEST_CASE("random search finds the sphere optimum with budget 10x the space size") {
  const auto space = sphere120();
  const auto objective = sphere120_objective(space);
  int found = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (random_search(space, 1200, objective, seed).best_objective == 0.0) ++found;
  }
  CHECK(found >= 99);
}
