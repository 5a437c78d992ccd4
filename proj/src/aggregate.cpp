#include "topex/aggregate.hpp"

#include "topex/error.hpp"
#include "topex/fileio.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace topex {

using nlohmann::json;

namespace {

// Sums in a canonical order so results do not depend on input order.
double order_free_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

}  // namespace

std::string_view to_string(WeightingScheme scheme) {
  return scheme == WeightingScheme::kSum ? "SUM" : "INVERSE_FREQUENCY";
}

std::string_view to_string(AggregationPath path) {
  return path == AggregationPath::kGlobalWord ? "GLOBAL_WORD" : "LOCAL_ADDITIVE";
}

WeightingScheme parse_weighting_scheme(std::string_view text) {
  if (text == "SUM" || text == "sum") return WeightingScheme::kSum;
  if (text == "INVERSE_FREQUENCY" || text == "inverse-frequency") {
    return WeightingScheme::kInverseFrequency;
  }
  throw ValidationError("unknown weighting scheme \"" + std::string(text) + "\"");
}

AggregationPath parse_aggregation_path(std::string_view text) {
  if (text == "GLOBAL_WORD" || text == "global-word") return AggregationPath::kGlobalWord;
  if (text == "LOCAL_ADDITIVE" || text == "local-additive") return AggregationPath::kLocalAdditive;
  throw ValidationError("unknown aggregation path \"" + std::string(text) + "\"");
}

double GlobalWordImportance::total() const {
  double sum = 0.0;
  for (const auto& [_, v] : g) sum += v;
  return sum;
}

double GlobalTopicExplanation::total() const {
  double sum = 0.0;
  for (double v : G) sum += v;
  return sum;
}

double LocalTopicExplanation::total() const {
  double sum = 0.0;
  for (double v : L) sum += v;
  return sum;
}

GlobalWordImportance global_word_importance(std::span<const WordLocalValues> instances,
                                            const CorpusCounts& counts,
                                            WeightingScheme scheme) {
  std::map<Word, std::vector<double>> magnitudes;
  for (const auto& inst : instances) {
    for (const auto& [w, v] : inst.values) magnitudes[w].push_back(std::abs(v));
  }
  GlobalWordImportance out;
  out.scheme = scheme;
  out.instance_count = instances.size();
  for (auto& [w, values] : magnitudes) {
    const std::size_t count = counts.count(w);
    if (count == 0) {
      throw ValidationError("word \"" + w.str() + "\" has attributions but no corpus count");
    }
    double sum = order_free_sum(std::move(values));
    out.g[w] = scheme == WeightingScheme::kSum ? sum : sum / static_cast<double>(count);
  }
  return out;
}

std::vector<std::string> explanation_labels(const TopicMembership& membership) {
  std::vector<std::string> labels = membership.labels;
  labels.emplace_back(kOtherLabel);
  return labels;
}

GlobalTopicExplanation topic_importance(const GlobalWordImportance& g,
                                        const TopicMembership& membership) {
  const std::size_t T = membership.num_topics();
  GlobalTopicExplanation out;
  out.topic_labels = explanation_labels(membership);
  out.G.assign(T + 1, 0.0);
  for (const auto& [w, value] : g.g) {
    if (const auto* weights = membership.find(w)) {
      for (const auto& [t, p] : *weights) out.G[t] += p * value;
    } else {
      out.G[T] += value;
    }
  }
  out.metadata.scheme = g.scheme;
  out.metadata.source = membership.source;
  out.metadata.path = AggregationPath::kGlobalWord;
  out.metadata.instance_count = g.instance_count;
  return out;
}

std::map<Word, double> local_word_importance(const WordLocalValues& instance) {
  std::map<Word, double> local;
  for (const auto& [w, v] : instance.values) local[w] += v;
  return local;
}

LocalTopicExplanation local_topic_importance(const std::map<Word, double>& local,
                                             const TopicMembership& membership,
                                             std::string instance_id, double base_value) {
  const std::size_t T = membership.num_topics();
  LocalTopicExplanation out{std::move(instance_id), std::vector<double>(T + 1, 0.0), base_value};
  for (const auto& [w, value] : local) {
    if (const auto* weights = membership.find(w)) {
      for (const auto& [t, p] : *weights) out.L[t] += p * value;
    } else {
      out.L[T] += value;
    }
  }
  return out;
}

GlobalTopicExplanation global_from_local(std::span<const LocalTopicExplanation> locals,
                                         const TopicMembership& membership) {
  const std::size_t width = membership.num_topics() + 1;
  std::vector<std::vector<double>> magnitudes(width);
  for (const auto& local : locals) {
    if (local.L.size() != width) {
      throw ValidationError("local explanation \"" + local.instance_id + "\" has " +
                            std::to_string(local.L.size()) + " entries, expected " +
                            std::to_string(width));
    }
    for (std::size_t t = 0; t < width; ++t) magnitudes[t].push_back(std::abs(local.L[t]));
  }
  GlobalTopicExplanation out;
  out.topic_labels = explanation_labels(membership);
  out.G.resize(width);
  for (std::size_t t = 0; t < width; ++t) out.G[t] = order_free_sum(std::move(magnitudes[t]));
  out.metadata.source = membership.source;
  out.metadata.path = AggregationPath::kLocalAdditive;
  out.metadata.instance_count = locals.size();
  return out;
}

GlobalTopicExplanation explain(const std::vector<InstanceAttribution>& instances,
                               const TopicMembership& membership, WeightingScheme scheme,
                               AggregationPath path) {
  if (instances.empty()) throw ValidationError("no instances to explain");
  std::vector<WordLocalValues> words;
  words.reserve(instances.size());
  for (const auto& inst : instances) words.push_back(aggregate_tokens_to_words(inst));

  GlobalTopicExplanation out;
  if (path == AggregationPath::kGlobalWord) {
    auto [vocab, counts] = build_vocabulary(instances);
    out = topic_importance(global_word_importance(words, counts, scheme), membership);
  } else {
    std::vector<LocalTopicExplanation> locals;
    locals.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      locals.push_back(local_topic_importance(local_word_importance(words[i]), membership,
                                              instances[i].instance_id, instances[i].base_value));
    }
    out = global_from_local(locals, membership);
  }
  out.metadata.scheme = scheme;
  out.metadata.class_label = instances.front().class_label;
  return out;
}

std::string explanation_to_json(const GlobalTopicExplanation& e) {
  json meta = {{"model_id", e.metadata.model_id},
               {"dataset_id", e.metadata.dataset_id},
               {"class_label", e.metadata.class_label},
               {"scheme", to_string(e.metadata.scheme)},
               {"membership_source", to_string(e.metadata.source)},
               {"path", to_string(e.metadata.path)},
               {"instance_count", e.metadata.instance_count},
               {"config", e.metadata.config}};
  json doc = {{"metadata", std::move(meta)}, {"topic_labels", e.topic_labels}, {"G", e.G}};
  return doc.dump(2) + "\n";
}

GlobalTopicExplanation explanation_from_json(std::string_view text, const std::string& source) {
  const std::string where = source.empty() ? "explanation" : source;
  auto fail = [&](const std::string& msg) { return ValidationError(where + ": " + msg); };
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw fail(std::string("malformed JSON: ") + e.what());
  }
  try {
    GlobalTopicExplanation e;
    const json& meta = doc.at("metadata");
    e.metadata.model_id = meta.at("model_id").get<std::string>();
    e.metadata.dataset_id = meta.at("dataset_id").get<std::string>();
    e.metadata.class_label = meta.at("class_label").get<std::string>();
    e.metadata.scheme = parse_weighting_scheme(meta.at("scheme").get<std::string>());
    e.metadata.source = parse_membership_source(meta.at("membership_source").get<std::string>());
    e.metadata.path = parse_aggregation_path(meta.at("path").get<std::string>());
    e.metadata.instance_count = meta.value("instance_count", std::size_t{0});
    if (meta.contains("config")) {
      e.metadata.config = meta.at("config").get<std::map<std::string, std::string>>();
    }
    e.topic_labels = doc.at("topic_labels").get<std::vector<std::string>>();
    e.G = doc.at("G").get<std::vector<double>>();
    if (e.G.empty() || e.G.size() != e.topic_labels.size()) {
      throw fail("topic_labels and G must be non-empty and of equal length");
    }
    if (e.topic_labels.back() != kOtherLabel) throw fail("last topic label must be OTHER");
    for (double v : e.G) {
      if (!std::isfinite(v) || v < 0.0) throw fail("G entries must be finite and non-negative");
    }
    return e;
  } catch (const json::exception& ex) {
    throw fail(std::string("invalid explanation document: ") + ex.what());
  } catch (const ValidationError& ex) {
    if (std::string_view(ex.what()).starts_with(where)) throw;
    throw fail(ex.what());
  }
}

}  // namespace topex
