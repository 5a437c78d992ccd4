#include "topex/shapley.hpp"

#include "topex/error.hpp"
#include "topex/random.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <istream>
#include <numeric>

namespace topex {

namespace {

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

}  // namespace

ShapleyValues exact_shapley(std::size_t n, const ScoreFunction& f) {
  if (n > kMaxExactPlayers) {
    throw ValidationError("exact Shapley enumeration is limited to " +
                          std::to_string(kMaxExactPlayers) + " tokens, got " +
                          std::to_string(n) + "; use sampled Shapley instead");
  }
  const std::size_t coalitions = std::size_t{1} << n;
  std::vector<double> table(coalitions);
  std::vector<std::uint8_t> present(n);
  for (std::size_t mask = 0; mask < coalitions; ++mask) {
    for (std::size_t k = 0; k < n; ++k) present[k] = (mask >> k) & 1U;
    table[mask] = f(present);
  }

  ShapleyValues out;
  out.empty_value = table.front();
  out.full_value = table.back();
  out.values.assign(n, 0.0);

  // weight(s) = s!(n-s-1)!/n! = 1 / (n * C(n-1, s))
  std::vector<double> weight(n);
  for (std::size_t s = 0; s < n; ++s) {
    weight[s] = 1.0 / (static_cast<double>(n) * binomial(n - 1, s));
  }

  std::vector<CompensatedSum> by_size(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::fill(by_size.begin(), by_size.end(), CompensatedSum{});
    const std::size_t bit = std::size_t{1} << k;
    for (std::size_t mask = 0; mask < coalitions; ++mask) {
      if (mask & bit) continue;
      auto size = static_cast<std::size_t>(std::popcount(mask));
      by_size[size].add(table[mask | bit] - table[mask]);
    }
    CompensatedSum v;
    for (std::size_t s = 0; s < n; ++s) v.add(weight[s] * by_size[s].value());
    out.values[k] = v.value();
  }
  return out;
}

ShapleyValues sampled_shapley(std::size_t n, const ScoreFunction& f,
                              std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw ValidationError("sampled Shapley needs at least one sample");
  Rng rng(seed);
  std::vector<std::uint8_t> present(n, 0);
  ShapleyValues out;
  out.empty_value = f(present);
  std::fill(present.begin(), present.end(), 1);
  out.full_value = f(present);

  std::vector<CompensatedSum> totals(n);
  std::vector<std::size_t> order(n);
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order.begin(), order.end());
    std::fill(present.begin(), present.end(), 0);
    double prev = out.empty_value;
    for (std::size_t k : order) {
      present[k] = 1;
      double cur = f(present);
      totals[k].add(cur - prev);
      prev = cur;
    }
  }
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = totals[k].value() / static_cast<double>(samples);
  }
  return out;
}

double ToyModel::weight(const Word& w) const {
  auto it = word_weights.find(w);
  return it == word_weights.end() ? 0.0 : it->second;
}

ScoreFunction ToyModel::score_function(std::vector<Word> tokens) const {
  std::vector<double> token_weight(tokens.size());
  for (std::size_t k = 0; k < tokens.size(); ++k) token_weight[k] = weight(tokens[k]);

  // For each interaction, the token positions holding each of its words.
  std::vector<std::pair<std::vector<std::vector<std::size_t>>, double>> terms;
  for (const auto& inter : interactions) {
    std::vector<std::vector<std::size_t>> positions;
    bool possible = true;
    for (const auto& w : inter.words) {
      std::vector<std::size_t> at;
      for (std::size_t k = 0; k < tokens.size(); ++k) {
        if (tokens[k] == w) at.push_back(k);
      }
      if (at.empty()) possible = false;
      positions.push_back(std::move(at));
    }
    if (possible) terms.emplace_back(std::move(positions), inter.weight);
  }

  return [bias = bias, token_weight = std::move(token_weight),
          terms = std::move(terms)](std::span<const std::uint8_t> present) {
    double total = bias;
    for (std::size_t k = 0; k < token_weight.size(); ++k) {
      if (present[k]) total += token_weight[k];
    }
    for (const auto& [positions, w] : terms) {
      bool all = true;
      for (const auto& at : positions) {
        bool any = false;
        for (std::size_t k : at) any = any || present[k] != 0;
        all = all && any;
      }
      if (all) total += w;
    }
    return total;
  };
}

double ToyModel::score(const std::vector<Word>& tokens) const {
  std::vector<std::uint8_t> all(tokens.size(), 1);
  return score_function(tokens)(all);
}

ToyModel ToyModel::from_json(std::istream& in, const std::string& source) {
  using nlohmann::json;
  auto fail = [&](const std::string& msg) {
    return ValidationError((source.empty() ? "toy model" : source) + ": " + msg);
  };
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw fail(std::string("malformed JSON: ") + e.what());
  }
  auto finite = [&](const json& v, const std::string& what) {
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw fail(what + ": expected a finite number");
    }
    return v.get<double>();
  };
  auto word = [&](const std::string& key) {
    auto w = Word::from_key(key);
    if (!w) throw fail("word \"" + key + "\" is empty after normalization");
    return *w;
  };

  if (!doc.is_object()) throw fail("expected a JSON object");
  ToyModel model;
  model.bias = doc.contains("bias") ? finite(doc["bias"], "bias") : 0.0;
  if (doc.contains("weights")) {
    if (!doc["weights"].is_object()) throw fail("weights: expected an object");
    for (const auto& [key, value] : doc["weights"].items()) {
      model.word_weights[word(key)] += finite(value, "weights." + key);
    }
  }
  if (doc.contains("interactions")) {
    if (!doc["interactions"].is_array()) throw fail("interactions: expected an array");
    for (const auto& item : doc["interactions"]) {
      if (!item.is_object() || !item.contains("words") || !item["words"].is_array()) {
        throw fail("interactions: each entry needs a \"words\" array");
      }
      Interaction inter;
      for (const auto& w : item["words"]) {
        if (!w.is_string()) throw fail("interactions: words must be strings");
        inter.words.push_back(word(w.get<std::string>()));
      }
      inter.weight = finite(item.value("weight", json(0.0)), "interactions.weight");
      model.interactions.push_back(std::move(inter));
    }
  }
  return model;
}

namespace {

InstanceAttribution to_instance(const std::vector<std::string>& tokens,
                                const ShapleyValues& shap, const std::string& instance_id,
                                const std::string& class_label) {
  InstanceAttribution inst;
  inst.instance_id = instance_id;
  inst.class_label = class_label;
  inst.base_value = shap.empty_value;
  for (std::size_t k = 0; k < tokens.size(); ++k) inst.tokens.push_back({tokens[k], shap.values[k]});
  inst.word_groups = word_groups_per_token(inst.tokens);
  return inst;
}

std::vector<Word> token_words(const std::vector<std::string>& tokens) {
  std::vector<Word> words;
  words.reserve(tokens.size());
  for (const auto& t : tokens) words.push_back(Word::from_token(t));
  return words;
}

}  // namespace

InstanceAttribution attribute_exact(const ToyModel& model,
                                    const std::vector<std::string>& tokens,
                                    const std::string& instance_id,
                                    const std::string& class_label) {
  auto shap = exact_shapley(tokens.size(), model.score_function(token_words(tokens)));
  return to_instance(tokens, shap, instance_id, class_label);
}

InstanceAttribution attribute_sampled(const ToyModel& model,
                                      const std::vector<std::string>& tokens,
                                      const std::string& instance_id,
                                      const std::string& class_label,
                                      std::uint64_t samples, std::uint64_t seed) {
  auto shap = sampled_shapley(tokens.size(), model.score_function(token_words(tokens)),
                              samples, seed);
  return to_instance(tokens, shap, instance_id, class_label);
}

}  // namespace topex
