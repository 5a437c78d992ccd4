#include "topex/error.hpp"
#include "topex/shapley.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace topex;

namespace {

ToyModel model_from(const std::string& json) {
  std::istringstream in(json);
  return ToyModel::from_json(in);
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("single player game gets its marginal") {
  auto model = model_from(R"({"bias": 0, "weights": {"good": 2.0}})");
  auto inst = attribute_exact(model, {"good"}, "i", "pos");
  REQUIRE(inst.tokens.size() == 1);
  CHECK(inst.tokens[0].score == 2.0);
  CHECK(inst.base_value == 0.0);
}

TEST_CASE("additive model yields each token's weight") {
  auto model = model_from(R"({"bias": 0.5, "weights": {"tasty": 1.25, "fries": -0.75, "the": 0.125}})");
  auto inst = attribute_exact(model, {"The", "tasty", "fries", "!", "Tasty"}, "i", "pos");
  CHECK(inst.tokens[0].score == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(inst.tokens[1].score == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(inst.tokens[2].score == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(std::abs(inst.tokens[3].score) < 1e-15);
  CHECK(inst.tokens[4].score == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(inst.base_value == 0.5);
  CHECK(inst.word_groups[3].word.is_punct());
}

TEST_CASE("four-token interaction game matches the permutation definition") {
  // f adds +1.0 only when tokens 1 and 2 are both present.
  ScoreFunction f = [](std::span<const std::uint8_t> p) {
    return 0.3 * p[0] + 0.7 * p[3] + (p[1] && p[2] ? 1.0 : 0.0);
  };
  auto exact = exact_shapley(4, f);
  auto brute = testing::permutation_shapley(4, f);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(exact.values[k] - brute[k]) < 1e-12);
  CHECK(exact.values[1] == doctest::Approx(0.5));
  CHECK(exact.values[2] == doctest::Approx(0.5));
}

TEST_CASE("efficiency, symmetry and null player on random games") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + rng() % 8;
    auto game = testing::make_random_game(n, rng);
    auto shap = exact_shapley(n, std::cref(game));
    CHECK(std::abs(sum(shap.values) - (shap.full_value - shap.empty_value)) < 1e-9);
    auto brute = testing::permutation_shapley(n, std::cref(game));
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(shap.values[k] - brute[k]) < 1e-12);
  }

  // Symmetric players 0 and 1; player 2 is null.
  ScoreFunction sym = [](std::span<const std::uint8_t> p) {
    return (p[0] || p[1] ? 1.0 : 0.0) + 0.5 * p[3];
  };
  auto s = exact_shapley(4, sym);
  CHECK(s.values[0] == s.values[1]);
  CHECK(s.values[2] == 0.0);
}

TEST_CASE("exact enumeration refuses more than 20 tokens") {
  ScoreFunction f = [](std::span<const std::uint8_t>) { return 0.0; };
  CHECK_THROWS_AS(exact_shapley(21, f), ValidationError);
  CHECK_NOTHROW(exact_shapley(0, f));
}

TEST_CASE("sampled Shapley is deterministic and converges") {
  std::mt19937_64 rng(5);
  auto game = testing::make_random_game(8, rng);
  auto a = sampled_shapley(8, std::cref(game), 500, 42);
  auto b = sampled_shapley(8, std::cref(game), 500, 42);
  CHECK(a.values == b.values);
  auto c = sampled_shapley(8, std::cref(game), 500, 43);
  CHECK(a.values != c.values);

  auto exact = exact_shapley(8, std::cref(game));
  auto estimate = sampled_shapley(8, std::cref(game), 20000, 1);
  for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(estimate.values[k] - exact.values[k]) < 0.05);
  // Every permutation telescopes, so efficiency holds for the estimate too.
  CHECK(std::abs(sum(estimate.values) - (estimate.full_value - estimate.empty_value)) < 1e-9);
}

TEST_CASE("sampled Shapley needs samples") {
  ScoreFunction f = [](std::span<const std::uint8_t>) { return 0.0; };
  CHECK_THROWS_AS(sampled_shapley(3, f, 0, 1), ValidationError);
}

TEST_CASE("toy model interactions and validation") {
  auto model = model_from(
      R"({"bias": 0.1, "weights": {"tasty": 1.0}, "interactions": [{"words": ["tasty", "burgers"], "weight": 0.5}]})");
  std::vector<Word> words{*Word::from_raw("tasty"), *Word::from_raw("burgers")};
  CHECK(model.score(words) == doctest::Approx(1.6));
  auto inst = attribute_exact(model, {"tasty", "burgers"}, "i", "c");
  CHECK(inst.tokens[0].score == doctest::Approx(1.25));
  CHECK(inst.tokens[1].score == doctest::Approx(0.25));

  CHECK_THROWS_AS(model_from(R"({"weights": {"!!": 1.0}})"), ValidationError);
  CHECK_THROWS_AS(model_from(R"({"weights": {"a": "x"}})"), ValidationError);
  CHECK_THROWS_AS(model_from("[1,2"), ValidationError);
  auto punct = model_from(R"({"weights": {"⟨punct⟩": 0.25}})");
  CHECK(punct.weight(Word::punct()) == 0.25);
}
