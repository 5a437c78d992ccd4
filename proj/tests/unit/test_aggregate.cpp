#include "topex/aggregate.hpp"
#include "topex/error.hpp"
#include "topex/random.hpp"
#include "topex/shapley.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace topex;

namespace {

Word W(const char* s) { return *Word::from_raw(s); }

WordLocalValues local(std::initializer_list<std::pair<const char*, double>> items,
                      std::string id = "i") {
  WordLocalValues out{std::move(id), {}};
  for (const auto& [w, v] : items) out.values.emplace_back(W(w), v);
  return out;
}

CorpusCounts counts_for(const std::vector<WordLocalValues>& instances) {
  CorpusCounts c;
  for (const auto& inst : instances) {
    for (const auto& [w, v] : inst.values) {
      ++c.word_count[w];
      ++c.total;
    }
  }
  return c;
}

TopicMembership membership(std::vector<std::string> labels,
                           std::initializer_list<std::pair<const char*, TopicMembership::Weights>> items) {
  TopicMembership m;
  m.source = MembershipSource::kLexicon;
  m.labels = std::move(labels);
  for (const auto& [w, ws] : items) m.weights[W(w)] = ws;
  return m;
}

InstanceAttribution random_instance(Rng& rng, const std::vector<std::string>& pool, std::string id) {
  InstanceAttribution inst;
  inst.instance_id = std::move(id);
  inst.class_label = "positive";
  inst.base_value = rng.uniform() - 0.5;
  const std::size_t n = 1 + rng.below(8);
  for (std::size_t k = 0; k < n; ++k) {
    inst.tokens.push_back({pool[rng.below(pool.size())], rng.uniform() * 2.0 - 1.0});
    inst.word_groups.push_back({Word::from_token(inst.tokens.back().text), k, k + 1});
  }
  return inst;
}

const std::vector<std::string> kPool{"tasty", "burgers", "fries", "slow", "staff", "the", "!", "good"};

TopicMembership fixture_membership() {
  return membership({"FOOD", "SERVICE"}, {{"tasty", {{0, 1.0}}},
                                          {"burgers", {{0, 1.0}}},
                                          {"fries", {{0, 0.5}, {1, 0.5}}},
                                          {"slow", {{1, 1.0}}},
                                          {"staff", {{1, 1.0}}},
                                          {"good", {{0, 0.25}, {1, 0.75}}}});
}

}  // namespace

TEST_CASE("tasty averages to 1.01") {
  std::vector<WordLocalValues> inst{local({{"tasty", 0.73}}), local({{"tasty", 1.29}})};
  auto c = counts_for(inst);
  auto g = global_word_importance(inst, c, WeightingScheme::kInverseFrequency);
  CHECK(std::abs(g.g.at(W("tasty")) - 1.01) < 1e-12);
  auto s = global_word_importance(inst, c, WeightingScheme::kSum);
  CHECK(std::abs(s.g.at(W("tasty")) - 2.02) < 1e-12);
  CHECK(g.instance_count == 2);
}

TEST_CASE("absolute values are taken before averaging") {
  std::vector<WordLocalValues> inst{local({{"x", -0.5}}), local({{"x", 0.5}})};
  auto g = global_word_importance(inst, counts_for(inst), WeightingScheme::kInverseFrequency);
  CHECK(g.g.at(W("x")) == 0.5);
}

TEST_CASE("word missing from counts is a consistency error") {
  std::vector<WordLocalValues> inst{local({{"x", 1.0}})};
  CorpusCounts empty;
  CHECK_THROWS_AS(global_word_importance(inst, empty, WeightingScheme::kSum), ValidationError);
}

TEST_CASE("topic importance sums membership-weighted word importance") {
  GlobalWordImportance g;
  g.g = {{W("tasty"), 1.01}, {W("burgers"), 0.40}, {W("fries"), 0.57}};
  auto m = membership({"FOOD"}, {{"tasty", {{0, 1.0}}}, {"burgers", {{0, 1.0}}}, {"fries", {{0, 1.0}}}});
  auto G = topic_importance(g, m);
  CHECK(G.topic_labels == std::vector<std::string>{"FOOD", "OTHER"});
  CHECK(std::abs(G.G[0] - 1.98) < 1e-12);
  CHECK(G.G[1] == 0.0);

  GlobalWordImportance split;
  split.g = {{W("w"), 2.0}};
  auto G2 = topic_importance(split, membership({"A", "B"}, {{"w", {{0, 0.5}, {1, 0.5}}}}));
  CHECK(G2.G == std::vector<double>{1.0, 1.0, 0.0});

  auto G3 = topic_importance(g, membership({"A", "B"}, {}));
  CHECK(G3.G.size() == 3);
  CHECK(G3.G[0] == 0.0);
  CHECK(G3.G[1] == 0.0);
  CHECK(std::abs(G3.G[2] - 1.98) < 1e-12);
}

TEST_CASE("local word importance keeps signs") {
  auto l = local_word_importance(local({{"good", 0.3}, {"movie", 0.4}, {"good", -0.1}}));
  CHECK(std::abs(l.at(W("good")) - 0.2) < 1e-15);
  CHECK(l.at(W("movie")) == 0.4);
  auto distinct = local_word_importance(local({{"a", 0.1}, {"b", -0.2}}));
  CHECK(distinct.at(W("a")) == 0.1);
  CHECK(distinct.at(W("b")) == -0.2);
}

TEST_CASE("local topic importance is additive") {
  auto m = fixture_membership();
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng, kPool, "x");
    auto l = local_word_importance(aggregate_tokens_to_words(inst));
    auto L = local_topic_importance(l, m, inst.instance_id, inst.base_value);
    double lw = 0.0;
    for (const auto& [w, v] : l) lw += v;
    CHECK(std::abs(L.total() - lw) < 1e-12);
    CHECK(std::abs(L.total() - inst.token_total()) < 1e-12);
  }
  auto all_other = local_topic_importance({{W("a"), 1.5}, {W("b"), -0.5}}, membership({"A"}, {}));
  CHECK(all_other.L == std::vector<double>{0.0, 1.0});
}

TEST_CASE("exact Shapley attributions add up to the model output") {
  ToyModel model;
  model.bias = 0.3;
  model.word_weights = {{W("tasty"), 1.0}, {W("slow"), -0.8}, {W("fries"), 0.2}};
  model.interactions.push_back({{W("tasty"), W("fries")}, 0.5});
  auto m = fixture_membership();
  std::vector<std::string> tokens{"Tasty", "fries", "but", "slow", "staff", "!"};
  auto inst = attribute_exact(model, tokens, "s1", "positive");
  auto L = local_topic_importance(local_word_importance(aggregate_tokens_to_words(inst)), m,
                                  inst.instance_id, inst.base_value);
  std::vector<Word> words;
  for (const auto& t : tokens) words.push_back(Word::from_token(t));
  CHECK(std::abs(inst.base_value + L.total() - model.score(words)) < 1e-9);
}

TEST_CASE("global from local sums magnitudes") {
  auto m = membership({"A"}, {{"a", {{0, 1.0}}}});
  std::vector<LocalTopicExplanation> locals{{"1", {1.0, -2.0}, 0.0}, {"2", {-3.0, 4.0}, 0.0}};
  auto G = global_from_local(locals, m);
  CHECK(G.G == std::vector<double>{4.0, 6.0});
  CHECK(G.metadata.path == AggregationPath::kLocalAdditive);

  std::vector<LocalTopicExplanation> single{{"1", {-0.5, 0.25}, 0.0}};
  CHECK(global_from_local(single, m).G == std::vector<double>{0.5, 0.25});

  std::vector<LocalTopicExplanation> ragged{{"1", {1.0, 2.0}, 0.0}, {"2", {1.0}, 0.0}};
  CHECK_THROWS_AS(global_from_local(ragged, m), ValidationError);
}

TEST_CASE("pipeline matches a recompute from raw token records") {
  auto m = fixture_membership();
  Rng rng(8);
  std::vector<InstanceAttribution> instances;
  for (int i = 0; i < 5; ++i) instances.push_back(random_instance(rng, kPool, "r" + std::to_string(i)));

  // Straight-line recompute: tokens are one per group, so each token is a word.
  const std::vector<std::string> labels{"FOOD", "SERVICE", "OTHER"};
  auto topic_of = [&](const std::string& text, std::size_t t) {
    const auto* ws = m.find(Word::from_token(text));
    if (ws == nullptr) return t == 2 ? 1.0 : 0.0;
    for (const auto& [tt, p] : *ws) {
      if (tt == t) return p;
    }
    return 0.0;
  };
  std::vector<double> expected_local(3, 0.0);
  std::map<std::string, std::pair<double, int>> abs_sum;
  for (const auto& inst : instances) {
    std::vector<double> L(3, 0.0);
    for (const auto& tok : inst.tokens) {
      for (std::size_t t = 0; t < 3; ++t) L[t] += topic_of(tok.text, t) * tok.score;
      auto& [s, n] = abs_sum[Word::from_token(tok.text).str()];
      s += std::abs(tok.score);
      ++n;
    }
    for (std::size_t t = 0; t < 3; ++t) expected_local[t] += std::abs(L[t]);
  }
  std::vector<double> expected_global(3, 0.0);
  for (const auto& [w, sn] : abs_sum) {
    const std::string text = w == std::string(Word::kPunctSurface) ? "!" : w;
    for (std::size_t t = 0; t < 3; ++t) expected_global[t] += topic_of(text, t) * sn.first / sn.second;
  }

  auto local_path = explain(instances, m, WeightingScheme::kInverseFrequency, AggregationPath::kLocalAdditive);
  auto global_path = explain(instances, m, WeightingScheme::kInverseFrequency, AggregationPath::kGlobalWord);
  CHECK(local_path.topic_labels == labels);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(std::abs(local_path.G[t] - expected_local[t]) < 1e-12);
    CHECK(std::abs(global_path.G[t] - expected_global[t]) < 1e-12);
  }
  CHECK(local_path.metadata.instance_count == 5);
}

TEST_CASE("aggregation properties on random fixtures") {
  auto m = fixture_membership();
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<InstanceAttribution> instances;
    const std::size_t n = 1 + rng.below(10);
    for (std::size_t i = 0; i < n; ++i) instances.push_back(random_instance(rng, kPool, std::to_string(i)));

    for (auto path : {AggregationPath::kGlobalWord, AggregationPath::kLocalAdditive}) {
      for (auto scheme : {WeightingScheme::kSum, WeightingScheme::kInverseFrequency}) {
        auto base = explain(instances, m, scheme, path);

        // Scale equivariance with a power of two keeps the arithmetic exact.
        for (double c : {-2.0, 0.5, 4.0}) {
          auto scaled = instances;
          for (auto& inst : scaled) {
            for (auto& tok : inst.tokens) tok.score *= c;
          }
          auto G = explain(scaled, m, scheme, path);
          for (std::size_t t = 0; t < G.G.size(); ++t) CHECK(G.G[t] == std::abs(c) * base.G[t]);
        }

        auto shuffled = instances;
        rng.shuffle(shuffled.begin(), shuffled.end());
        CHECK(explain(shuffled, m, scheme, path).G == base.G);
      }
    }

    // Mass conservation on the global-word path.
    std::vector<WordLocalValues> words;
    for (const auto& inst : instances) words.push_back(aggregate_tokens_to_words(inst));
    auto counts = counts_for(words);
    auto g = global_word_importance(words, counts, WeightingScheme::kInverseFrequency);
    auto G = topic_importance(g, m);
    CHECK(std::abs(G.total() - g.total()) < 1e-9);

    // Raising one word's importance never lowers a topic it belongs to.
    for (const auto& [w, ws] : m.weights) {
      if (!g.g.contains(w)) continue;
      auto bumped = g;
      bumped.g[w] += 0.1 + rng.uniform();
      auto Gb = topic_importance(bumped, m);
      for (const auto& [t, p] : ws) {
        if (p > 0.0) CHECK(Gb.G[t] >= G.G[t]);
      }
    }
  }
}

TEST_CASE("explanation JSON round trip") {
  auto m = fixture_membership();
  Rng rng(3);
  std::vector<InstanceAttribution> instances;
  for (int i = 0; i < 4; ++i) instances.push_back(random_instance(rng, kPool, std::to_string(i)));
  auto G = explain(instances, m, WeightingScheme::kSum, AggregationPath::kGlobalWord);
  G.metadata.model_id = "m";
  G.metadata.config["seed"] = "0";
  auto back = explanation_from_json(explanation_to_json(G));
  CHECK(back == G);

  CHECK_THROWS_AS(explanation_from_json(R"({"metadata":{},"topic_labels":["A"],"G":[1]})"),
                  ValidationError);
  CHECK_THROWS_AS(explanation_from_json("not json"), ValidationError);
}

TEST_CASE("enum spellings") {
  CHECK(parse_weighting_scheme("SUM") == WeightingScheme::kSum);
  CHECK(parse_weighting_scheme("inverse-frequency") == WeightingScheme::kInverseFrequency);
  CHECK(parse_aggregation_path("local-additive") == AggregationPath::kLocalAdditive);
  CHECK_THROWS_AS(parse_aggregation_path("sideways"), ValidationError);
}
