#include <doctest.h>

#include <cmath>
#include <fstream>

#include "hypabc/space.hpp"
#include "support.hpp"

using namespace hypabc;

namespace {

SearchSpace one_param(ParamSpec p) { return SearchSpace({std::move(p)}); }

ParamSpec integer(std::string name, double lo, double hi) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::integer;
  p.lower = lo;
  p.upper = hi;
  return p;
}

ParamSpec continuous(std::string name, double lo, double hi, bool excl = false) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::continuous;
  p.lower = lo;
  p.upper = hi;
  p.lower_exclusive = excl;
  return p;
}

ParamSpec categorical(std::string name, std::vector<std::string> choices) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::categorical;
  p.choices = std::move(choices);
  return p;
}

}  // namespace

TEST_CASE("validate_space accepts the bundled RF space") {
  const auto space = load_space_file(test::data_path("spaces/rf.json"));
  CHECK(space.dimension() == 6);
  CHECK(space[0].name == "n_estimators");
  CHECK(space[0].lower == 5);
  CHECK(space[0].upper == 500);
  CHECK(space[1].kind == ParamKind::categorical);
  CHECK(space[1].choices == std::vector<std::string>{"gini", "entropy"});
  CHECK(space[3].upper == 91);
}

TEST_CASE("bundled XGBoost and SVM spaces") {
  const auto xgb = load_space_file(test::data_path("spaces/xgboost.json"));
  CHECK(xgb.dimension() == 5);
  CHECK(xgb[xgb.index_of("subsample")].lower_exclusive);
  CHECK_FALSE(xgb[xgb.index_of("learning_rate")].lower_exclusive);
  const auto svm = load_space_file(test::data_path("spaces/svm.json"));
  CHECK(svm.dimension() == 2);
  CHECK(svm[1].choices.size() == 4);
}

TEST_CASE("validate_space minimal continuous space") {
  const auto space = validate_space(
      nlohmann::json::parse(R"([{"name":"x","type":"continuous","min":0,"max":1}])"));
  CHECK(space.dimension() == 1);
}

TEST_CASE("validate_space errors name the offending parameter") {
  auto error_of = [](const char* text) {
    try {
      validate_space(nlohmann::json::parse(text));
    } catch (const SpaceError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const auto degenerate = error_of(R"([{"name":"lr","type":"continuous","min":1,"max":1}])");
  CHECK(degenerate.find("degenerate bounds") != std::string::npos);
  CHECK(degenerate.find("lr") != std::string::npos);

  CHECK(error_of(R"([{"name":"a","type":"integer","min":0,"max":3},
                     {"name":"a","type":"integer","min":0,"max":3}])")
            .find("duplicate") != std::string::npos);
  CHECK(error_of(R"([{"name":"c","type":"categorical","choices":[]}])").find("empty choices") !=
        std::string::npos);
  CHECK(error_of(R"([{"name":"c","type":"boolean"}])").find("unknown kind") != std::string::npos);
  CHECK(error_of(R"([{"name":"n","type":"integer","min":0.5,"max":3}])").find("n") !=
        std::string::npos);
  CHECK(error_of(R"([{"name":"n","type":"integer","min":5,"max":3}])").find("exceeds") !=
        std::string::npos);
  CHECK(error_of(R"([{"name":"c","type":"categorical","choices":["a","a"]}])")
            .find("duplicate choice") != std::string::npos);
  CHECK(error_of(R"([])").find("at least one") != std::string::npos);
  CHECK(error_of(R"([{"name":"n","type":"integer","min":0,"max":3,"lower_exclusive":true}])")
            .find("lower_exclusive") != std::string::npos);
}

TEST_CASE("config_from_unit maps unit draws onto the box then repairs") {
  const auto space = SearchSpace({integer("n", 5, 500), categorical("c", {"a", "b", "c", "d"})});
  CHECK(config_from_unit(space, std::vector<double>{0.0, 0.0}).values ==
        std::vector<double>{5, 0});
  CHECK(config_from_unit(space, std::vector<double>{1.0, 1.0}).values ==
        std::vector<double>{500, 3});
  // categorical: 0 + 0.6 * 3 = 1.8 -> 2
  CHECK(config_from_unit(space, std::vector<double>{0.0, 0.6}).values[1] == 2.0);
}

TEST_CASE("repair clamps and rounds") {
  const auto space = one_param(integer("n", 5, 500));
  CHECK(repair(space, std::vector<double>{520.0}).values[0] == 500.0);
  CHECK(repair(space, std::vector<double>{6.8}).values[0] == 7.0);
  CHECK(repair(space, std::vector<double>{6.5}).values[0] == 7.0);  // half away from zero
  CHECK(repair(space, std::vector<double>{-40.0}).values[0] == 5.0);
  CHECK_THROWS_AS(repair(space, std::vector<double>{1.0, 2.0}), SpaceError);

  const auto neg = one_param(integer("m", -10, 10));
  CHECK(repair(neg, std::vector<double>{-2.5}).values[0] == -3.0);
  CHECK_FALSE(std::signbit(repair(neg, std::vector<double>{-0.4}).values[0]));
}

TEST_CASE("repair honours exclusive lower bounds") {
  const auto space = one_param(continuous("subsample", 0, 1, true));
  const auto r = repair(space, std::vector<double>{-0.3});
  CHECK(r.values[0] == 0.0 + 1e-6);
  CHECK(r.values[0] > 0.0);
  CHECK(is_repaired(space, r));
  CHECK(repair(space, std::vector<double>{1.7}).values[0] == 1.0);
  CHECK(repair(space, std::vector<double>{0.42}).values[0] == 0.42);
}

TEST_CASE("neighbor applies the single-dimension move") {
  const auto space =
      SearchSpace({continuous("x", 0, 100), integer("n", 0, 100), categorical("c", {"a", "b"})});
  const Configuration cur{{10.0, 10.0, 0.0}};
  const Configuration other{{6.0, 6.0, 1.0}};
  // 10 + 0.5 * (10 - 6) = 12
  CHECK(neighbor(space, cur, other, 0, 0.5).values == std::vector<double>{12.0, 10.0, 0.0});
  // 10 - 0.8 * 4 = 6.8 -> 7
  CHECK(neighbor(space, cur, other, 1, -0.8).values == std::vector<double>{10.0, 7.0, 0.0});
  for (std::size_t d = 0; d < 3; ++d) CHECK(neighbor(space, cur, other, d, 0.0) == cur);
  CHECK_THROWS_AS(neighbor(space, cur, other, 3, 0.1), SpaceError);
}

TEST_CASE("non-binary categorical moves clamp into the index range") {
  const auto space = one_param(categorical("kernel", {"linear", "poly", "rbf", "sigmoid"}));
  const Configuration cur{{3.0}};
  const Configuration other{{0.0}};
  CHECK(neighbor(space, cur, other, 0, 1.0).values[0] == 3.0);
  CHECK(neighbor(space, cur, other, 0, -0.4).values[0] == 2.0);  // 3 - 1.2 = 1.8
}

TEST_CASE("flip_binary is an XOR involution") {
  const auto space = load_space_file(test::data_path("spaces/rf.json"));
  Configuration gini{{150, 0, 10, 20, 5, 2}};
  const auto entropy = flip_binary(space, gini, 1);
  CHECK(entropy.values[1] == 1.0);
  CHECK(decode(space, entropy).label("criterion") == "entropy");
  CHECK(flip_binary(space, entropy, 1) == gini);
  CHECK_THROWS_AS(flip_binary(space, gini, 0), SpaceError);

  const auto svm = load_space_file(test::data_path("spaces/svm.json"));
  CHECK_THROWS_AS(flip_binary(svm, Configuration{{1.0, 2.0}}, 1), SpaceError);
}

TEST_CASE("decode maps indices to labels and keeps integer types") {
  const auto space = load_space_file(test::data_path("spaces/rf.json"));
  const Configuration c{{150, 1, 10, 20, 5, 2}};
  const auto a = decode(space, c);
  CHECK(std::get<std::int64_t>(a.at("n_estimators")) == 150);
  CHECK(a.label("criterion") == "entropy");
  CHECK(a.to_json().dump() ==
        R"({"n_estimators":150,"criterion":"entropy","max_depth":10,"max_features":20,)"
        R"("min_samples_split":5,"min_samples_leaf":2})");
  CHECK(decode(space, Configuration{{150, 0, 10, 20, 5, 2}}).label("criterion") == "gini");
  CHECK(encode(space, a) == c);
}

TEST_CASE("property: sample_uniform, repair, neighbor and decode over random spaces") {
  Rng gen(12345);
  for (int trial = 0; trial < 200; ++trial) {
    const auto space = test::random_space(gen);
    Rng rng(static_cast<std::uint64_t>(trial));
    std::vector<Configuration> pop;
    for (int s = 0; s < 8; ++s) {
      auto c = sample_uniform(space, rng);
      REQUIRE(is_repaired(space, c));
      for (std::size_t j = 0; j < space.dimension(); ++j) {
        CHECK(c.values[j] >= space[j].effective_lower());
        CHECK(c.values[j] <= space[j].effective_upper());
      }
      CHECK(encode(space, decode(space, c)) == c);
      pop.push_back(std::move(c));
    }
    for (int m = 0; m < 50; ++m) {
      const auto& cur = pop[rng.index(pop.size())];
      const auto& other = pop[rng.index(pop.size())];
      const auto dim = rng.index(space.dimension());
      const auto moved = neighbor(space, cur, other, dim, rng.uniform(-1, 1));
      CHECK(is_repaired(space, moved));
      for (std::size_t j = 0; j < space.dimension(); ++j) {
        if (j != dim) CHECK(std::bit_cast<std::uint64_t>(moved.values[j]) ==
                            std::bit_cast<std::uint64_t>(cur.values[j]));
      }
      // idempotence on arbitrary raw input
      std::vector<double> raw(space.dimension());
      for (auto& r : raw) r = rng.uniform(-1000, 1000);
      const auto once = repair(space, raw);
      CHECK(repair(space, once.values) == once);
    }
  }
}
