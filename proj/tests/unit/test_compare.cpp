#include "topex/compare.hpp"
#include "topex/error.hpp"
#include "topex/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace topex;

namespace {

GlobalTopicExplanation expl(std::vector<double> G, std::string id = "m",
                            std::vector<std::string> labels = {}) {
  GlobalTopicExplanation out;
  if (labels.empty()) {
    for (std::size_t t = 0; t + 1 < G.size(); ++t) labels.push_back("t" + std::to_string(t));
    labels.emplace_back("OTHER");
  }
  out.topic_labels = std::move(labels);
  out.G = std::move(G);
  out.metadata.model_id = std::move(id);
  return out;
}

std::vector<std::string> topics(const std::vector<RankedTopic>& rows) {
  std::vector<std::string> out;
  for (const auto& r : rows) out.push_back(r.topic);
  return out;
}

GlobalTopicExplanation random_expl(Rng& rng, std::size_t size, std::string id) {
  std::vector<double> G(size);
  for (auto& x : G) x = rng.uniform() * 10.0;
  G[0] += 0.1;
  return expl(std::move(G), std::move(id));
}

}  // namespace

TEST_CASE("l1 normalization") {
  CHECK(l1_normalize(expl({2.0, 2.0})).values == std::vector<double>{0.5, 0.5});
  CHECK(l1_normalize(expl({1.0, 3.0})).values == std::vector<double>{0.25, 0.75});
  CHECK_THROWS_AS(l1_normalize(expl({0.0, 0.0})), ValidationError);
  CHECK_THROWS_AS(l1_normalize(expl({-1.0, 2.0})), ValidationError);
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    auto n = l1_normalize(random_expl(rng, 2 + rng.below(30), "r"));
    double s = 0.0;
    for (double v : n.values) {
      CHECK(v >= 0.0);
      s += v;
    }
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("residual examples") {
  auto a = l1_normalize(expl({0.6, 0.4}, "A"));
  auto b = l1_normalize(expl({0.4, 0.6}, "B"));
  auto r = residual(a, b);
  CHECK(r.delta[0] == doctest::Approx(0.2));
  CHECK(r.delta[1] == doctest::Approx(-0.2));
  CHECK(r.distance_l1 == doctest::Approx(0.4));
  CHECK(r.model_a == "A");
  CHECK(r.model_b == "B");

  auto self = residual(a, a);
  CHECK(self.delta == std::vector<double>{0.0, 0.0});
  CHECK(self.distance_l1 == 0.0);
}

TEST_CASE("residual algebra on random pairs") {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const std::size_t size = 2 + rng.below(20);
    auto A = random_expl(rng, size, "A");
    auto B = random_expl(rng, size, "B");
    auto ab = residual(l1_normalize(A), l1_normalize(B));
    auto ba = residual(l1_normalize(B), l1_normalize(A));
    double sum = 0.0;
    for (std::size_t t = 0; t < size; ++t) {
      CHECK(ab.delta[t] == -ba.delta[t]);
      sum += ab.delta[t];
    }
    CHECK(std::abs(sum) < 1e-9);

    auto scaled = A;
    for (auto& x : scaled.G) x *= 7.0;
    auto sr = residual(l1_normalize(scaled), l1_normalize(B));
    for (std::size_t t = 0; t < size; ++t) CHECK(std::abs(sr.delta[t] - ab.delta[t]) < 1e-12);
  }
}

TEST_CASE("residual refuses mismatched explanations") {
  auto a = expl({1.0, 1.0}, "A", {"FOOD", "OTHER"});
  auto b = expl({1.0, 1.0}, "B", {"SERVICE", "OTHER"});
  try {
    residual(l1_normalize(a), l1_normalize(b));
    FAIL("expected refusal");
  } catch (const ComparisonRefused& e) {
    CHECK(std::string(e.what()).find("topic labels") != std::string::npos);
  }
  auto c = expl({1.0, 1.0}, "C", {"FOOD", "OTHER"});
  c.metadata.path = AggregationPath::kLocalAdditive;
  CHECK_THROWS_AS(residual(l1_normalize(a), l1_normalize(c)), ComparisonRefused);
  auto d = expl({1.0, 1.0}, "D", {"FOOD", "OTHER"});
  d.metadata.source = MembershipSource::kLexicon;
  CHECK_THROWS_AS(residual(l1_normalize(a), l1_normalize(d)), ComparisonRefused);
}

TEST_CASE("ranking") {
  // Unnormalized values chosen so the residual is (0.5, -0.3, 0.1, -0.3).
  auto a = l1_normalize(expl({0.6, 0.0, 0.2, 0.2}, "A", {"x", "y", "z", "OTHER"}));
  auto b = l1_normalize(expl({0.1, 0.3, 0.1, 0.5}, "B", {"x", "y", "z", "OTHER"}));
  auto r = residual(a, b);
  auto k1 = rank_topics(r, a, b, 1);
  CHECK(topics(k1.most_different) == std::vector<std::string>{"x"});
  CHECK(topics(k1.most_similar) == std::vector<std::string>{"z"});

  auto k3 = rank_topics(r, a, b, 3);
  // |delta| ties between y and OTHER break by label.
  CHECK(topics(k3.most_different) == std::vector<std::string>{"x", "OTHER", "y"});
  CHECK(topics(k3.most_important_a) == std::vector<std::string>{"x", "OTHER", "z"});
  CHECK(topics(k3.least_important_a) == std::vector<std::string>{"y", "OTHER", "z"});
  CHECK(k3.most_different[0].rank == 1);
  CHECK(k3.most_different[0].value_a == a.values[0]);

  auto big = rank_topics(r, a, b, 10);
  CHECK(big.most_different.size() == 4);
  CHECK(big.most_similar.size() == 4);

  auto no_other = rank_topics(r, a, b, 3, true);
  CHECK(no_other.other_excluded);
  CHECK(topics(no_other.most_different) == std::vector<std::string>{"x", "y", "z"});

  CHECK_THROWS_AS(rank_topics(r, a, b, 0), ValidationError);
}

TEST_CASE("comparing an explanation with itself") {
  auto a = expl({1.0, 2.0, 3.0}, "A");
  auto rep = compare_explanations(a, a, 3);
  CHECK(rep.distance_l1 == 0.0);
  for (double d : rep.delta) CHECK(d == 0.0);
  CHECK(rep.most_different.size() == 3);
  CHECK(rep.path == "GLOBAL_WORD");
}
