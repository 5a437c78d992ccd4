#pragma once

#include "topex/text.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace topex {

/// How the document-topic concentration `alpha` is read.
///   kTotal:    alpha is the sum over topics; each topic gets alpha / T
///              (MALLET's --alpha convention, the default).
///   kPerTopic: every topic gets alpha.
enum class AlphaMode { kTotal, kPerTopic };

struct LdaTrainingInfo {
  double alpha = 0.0;
  double beta = 0.0;
  AlphaMode alpha_mode = AlphaMode::kTotal;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::vector<Word> stopwords;
};

/// Topic-word distributions P(w | topic). Rows are stored densely over the
/// model vocabulary and each sums to 1.
class TopicModel {
 public:
  TopicModel(Vocabulary vocab, std::size_t num_topics, std::vector<double> topic_word,
             std::optional<LdaTrainingInfo> training = std::nullopt);

  std::size_t num_topics() const noexcept { return num_topics_; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  std::span<const double> row(std::size_t topic) const;
  double probability(std::size_t topic, std::size_t word_id) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::optional<LdaTrainingInfo>& training() const noexcept { return training_; }

  /// The k most probable words of a topic, ties broken by word.
  std::vector<std::pair<Word, double>> top_words(std::size_t topic, std::size_t k) const;

 private:
  Vocabulary vocab_;
  std::size_t num_topics_;
  std::vector<double> topic_word_;
  std::vector<std::string> labels_;
  std::optional<LdaTrainingInfo> training_;
};

/// "topic_00", "topic_01", ... zero padded so lexicographic order is numeric.
std::vector<std::string> lda_topic_labels(std::size_t num_topics);

/// Snapshot handed to LdaOptions::observer after every sweep.
/// topic_word_counts is word-major: index word_id * T + topic.
struct GibbsState {
  std::size_t iteration = 0;  // 1-based
  std::size_t num_topics = 0;
  std::size_t vocab_size = 0;
  std::size_t total_tokens = 0;
  std::span<const std::uint32_t> topic_word_counts;
  std::span<const std::uint32_t> topic_counts;
};

struct LdaOptions {
  std::size_t num_topics = 30;
  double alpha = 5.0;
  double beta = 0.01;
  AlphaMode alpha_mode = AlphaMode::kTotal;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  std::set<Word> stopwords;
  /// Recount every sweep and throw InvariantError on mismatch. Always on in
  /// debug builds.
  bool verify_counts = false;
  std::function<void(const GibbsState&)> observer;
};

/// The k most frequent words; ties broken lexicographically. Asking for more
/// words than exist returns all of them and logs a warning.
std::set<Word> compute_stopwords(const CorpusCounts& counts, std::size_t k = 100);

/// Collapsed Gibbs sampling with symmetric Dirichlet priors. Documents are
/// swept in the given order; the result depends only on (corpus, options).
/// Stopwords are removed from the model vocabulary.
TopicModel lda_train(const std::vector<std::vector<Word>>& corpus, const LdaOptions& options);

/// One document per line, whitespace-separated raw words. Punctuation-only
/// tokens are dropped.
std::vector<std::vector<Word>> read_corpus(std::istream& in);

/// CSV "topic_id,word,p_word_given_topic". Each topic's rows must sum to 1
/// within 1e-6.
TopicModel read_topic_matrix(std::istream& in, const std::string& source = "");
void write_topic_matrix(std::ostream& out, const TopicModel& model);

/// One line per topic: label, tab, top words separated by spaces.
void write_top_words(std::ostream& out, const TopicModel& model, std::size_t k);

}  // namespace topex
