#pragma once

#include "topex/attribution.hpp"
#include "topex/membership.hpp"
#include "topex/text.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace topex {

/// Label of the bucket collecting words outside every topic.
inline constexpr std::string_view kOtherLabel = "OTHER";

/// Per-word factor C(w) applied to summed absolute local values.
enum class WeightingScheme {
  kSum,               // C(w) = 1
  kInverseFrequency,  // C(w) = 1 / count(w): mean absolute value per occurrence
};

/// Which route produced a global topic explanation. The two generally give
/// different numbers because absolute values are taken at different levels.
enum class AggregationPath {
  kGlobalWord,     // |local word values| -> global word importance -> topics
  kLocalAdditive,  // signed local topic values -> sum of their magnitudes
};

std::string_view to_string(WeightingScheme scheme);
std::string_view to_string(AggregationPath path);
WeightingScheme parse_weighting_scheme(std::string_view text);
AggregationPath parse_aggregation_path(std::string_view text);

struct GlobalWordImportance {
  std::map<Word, double> g;  // non-negative
  WeightingScheme scheme = WeightingScheme::kInverseFrequency;
  std::size_t instance_count = 0;

  double total() const;
};

struct ExplanationMetadata {
  std::string model_id;
  std::string dataset_id;
  std::string class_label;
  WeightingScheme scheme = WeightingScheme::kInverseFrequency;
  MembershipSource source = MembershipSource::kLda;
  AggregationPath path = AggregationPath::kGlobalWord;
  std::size_t instance_count = 0;
  std::map<std::string, std::string> config;  // every knob that produced it

  bool operator==(const ExplanationMetadata&) const = default;
};

/// Global importance per topic, OTHER always last (index T).
struct GlobalTopicExplanation {
  std::vector<std::string> topic_labels;
  std::vector<double> G;
  ExplanationMetadata metadata;

  std::size_t other_index() const { return G.size() - 1; }
  double total() const;

  bool operator==(const GlobalTopicExplanation&) const = default;
};

/// Signed topic values of one instance; sums to the instance's total attribution.
struct LocalTopicExplanation {
  std::string instance_id;
  std::vector<double> L;  // length T + 1, OTHER last
  double base_value = 0.0;

  double total() const;
};

/// g_w = C(w) * sum over occurrences of |local value|. Throws ValidationError
/// when a word is missing from `counts`.
GlobalWordImportance global_word_importance(std::span<const WordLocalValues> instances,
                                            const CorpusCounts& counts,
                                            WeightingScheme scheme);

/// G_t = sum_w P(t | w) g_w; uncovered words add their g_w to OTHER.
GlobalTopicExplanation topic_importance(const GlobalWordImportance& g,
                                        const TopicMembership& membership);

/// Signed per-word sums within one instance.
std::map<Word, double> local_word_importance(const WordLocalValues& instance);

LocalTopicExplanation local_topic_importance(const std::map<Word, double>& local,
                                             const TopicMembership& membership,
                                             std::string instance_id = {},
                                             double base_value = 0.0);

/// G_t = sum_i |L_t^i|. Throws ValidationError on shape mismatch.
GlobalTopicExplanation global_from_local(std::span<const LocalTopicExplanation> locals,
                                         const TopicMembership& membership);

/// Labels of a membership plus OTHER.
std::vector<std::string> explanation_labels(const TopicMembership& membership);

/// Full pipeline from validated instances for one class.
GlobalTopicExplanation explain(const std::vector<InstanceAttribution>& instances,
                               const TopicMembership& membership, WeightingScheme scheme,
                               AggregationPath path);

/// JSON document {"metadata": {...}, "topic_labels": [...], "G": [...]}.
std::string explanation_to_json(const GlobalTopicExplanation& explanation);
GlobalTopicExplanation explanation_from_json(std::string_view text, const std::string& source = "");

}  // namespace topex
