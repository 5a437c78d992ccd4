#include "topex/membership.hpp"

#include "topex/error.hpp"
#include "topex/log.hpp"

namespace topex {

std::string_view to_string(MembershipSource source) {
  return source == MembershipSource::kLda ? "LDA" : "LEXICON";
}

MembershipSource parse_membership_source(std::string_view text) {
  if (text == "LDA") return MembershipSource::kLda;
  if (text == "LEXICON") return MembershipSource::kLexicon;
  throw ValidationError("unknown membership source \"" + std::string(text) + "\"");
}

const TopicMembership::Weights* TopicMembership::find(const Word& w) const {
  auto it = weights.find(w);
  return it == weights.end() ? nullptr : &it->second;
}

TopicMembership lda_membership(const TopicModel& model) {
  TopicMembership out;
  out.source = MembershipSource::kLda;
  out.labels = model.labels();
  const auto& vocab = model.vocabulary();
  const std::size_t T = model.num_topics();
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    double column = 0.0;
    for (std::size_t t = 0; t < T; ++t) column += model.probability(t, w);
    if (!(column > 0.0)) continue;  // only possible for imported matrices
    TopicMembership::Weights weights;
    for (std::size_t t = 0; t < T; ++t) {
      double p = model.probability(t, w);
      if (p > 0.0) weights.emplace_back(t, p / column);
    }
    out.weights.emplace(vocab.word(w), std::move(weights));
  }
  return out;
}

TopicMembership lexicon_membership(const Lexicon& lexicon, const Vocabulary& vocab) {
  TopicMembership out;
  out.source = MembershipSource::kLexicon;
  out.labels = lexicon.categories();
  for (const auto& w : vocab.words()) {
    auto matched = lexicon.match(w);
    if (matched.empty()) continue;
    const double share = 1.0 / static_cast<double>(matched.size());
    TopicMembership::Weights weights;
    for (auto c : matched) weights.emplace_back(c, share);
    out.weights.emplace(w, std::move(weights));
  }
  if (out.weights.empty()) {
    log::warn("lexicon covers none of the " + std::to_string(vocab.size()) +
              " vocabulary words; all importance goes to OTHER");
  }
  return out;
}

}  // namespace topex
