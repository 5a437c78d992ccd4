#pragma once

#include "topex/lda.hpp"
#include "topex/lexicon.hpp"
#include "topex/text.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace topex {

enum class MembershipSource { kLda, kLexicon };

std::string_view to_string(MembershipSource source);
MembershipSource parse_membership_source(std::string_view text);

/// Per-word topic distribution P(topic | w). Words without an entry are
/// outside every topic.
struct TopicMembership {
  using Weights = std::vector<std::pair<std::size_t, double>>;  // (topic, weight), ascending topic

  MembershipSource source = MembershipSource::kLda;
  std::vector<std::string> labels;  // one per topic, OTHER excluded
  std::map<Word, Weights> weights;

  std::size_t num_topics() const noexcept { return labels.size(); }
  const Weights* find(const Word& w) const;
};

/// Renormalizes each word's column of P(w | topic) over topics, assuming a
/// uniform topic prior.
TopicMembership lda_membership(const TopicModel& model);

/// 1 / T_w for each of the T_w categories a vocabulary word matches.
TopicMembership lexicon_membership(const Lexicon& lexicon, const Vocabulary& vocab);

}  // namespace topex
