#pragma once

#include "topex/aggregate.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace topex {

/// A topic explanation scaled to unit L1 mass.
struct NormalizedExplanation {
  std::vector<std::string> topic_labels;
  std::vector<double> values;  // non-negative, sums to 1
  ExplanationMetadata metadata;
};

/// Signed per-topic difference A - B of two normalized explanations.
struct ResidualExplanation {
  std::vector<std::string> topic_labels;
  std::vector<double> delta;
  std::string model_a;
  std::string model_b;
  double distance_l1 = 0.0;  // sum of |delta|
};

struct RankedTopic {
  std::size_t rank = 0;  // 1-based
  std::string topic;
  double value_a = 0.0;
  double value_b = 0.0;
  double delta = 0.0;

  bool operator==(const RankedTopic&) const = default;
};

struct ComparisonReport {
  std::string model_a;
  std::string model_b;
  std::size_t k = 3;
  bool other_excluded = false;
  std::string path;
  std::string membership_source;
  double distance_l1 = 0.0;
  std::vector<std::string> topic_labels;
  std::vector<double> normalized_a;
  std::vector<double> normalized_b;
  std::vector<double> delta;

  std::vector<RankedTopic> most_important_a;
  std::vector<RankedTopic> least_important_a;
  std::vector<RankedTopic> most_important_b;
  std::vector<RankedTopic> least_important_b;
  std::vector<RankedTopic> most_different;  // |delta| descending
  std::vector<RankedTopic> most_similar;    // |delta| ascending

  bool operator==(const ComparisonReport&) const = default;
};

/// Throws ValidationError when the explanation has no mass.
NormalizedExplanation l1_normalize(const GlobalTopicExplanation& explanation);

/// Throws ComparisonRefused unless labels, membership source and aggregation
/// path all match.
ResidualExplanation residual(const NormalizedExplanation& a, const NormalizedExplanation& b);

/// Ties are broken by topic label. Throws ValidationError when k == 0.
ComparisonReport rank_topics(const ResidualExplanation& r, const NormalizedExplanation& a,
                             const NormalizedExplanation& b, std::size_t k,
                             bool exclude_other = false);

/// normalize, residual and rank in one call.
ComparisonReport compare_explanations(const GlobalTopicExplanation& a,
                                      const GlobalTopicExplanation& b, std::size_t k,
                                      bool exclude_other = false);

}  // namespace topex
