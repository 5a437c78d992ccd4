#include "topex/lda.hpp"

#include "topex/error.hpp"
#include "topex/fileio.hpp"
#include "topex/log.hpp"
#include "topex/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

namespace topex {

std::vector<std::string> lda_topic_labels(std::size_t num_topics) {
  std::size_t width = 2;
  for (std::size_t n = num_topics > 0 ? num_topics - 1 : 0; n >= 100; n /= 10) ++width;
  std::vector<std::string> labels;
  labels.reserve(num_topics);
  for (std::size_t t = 0; t < num_topics; ++t) {
    std::string digits = std::to_string(t);
    labels.push_back("topic_" + std::string(width - std::min(width, digits.size()), '0') + digits);
  }
  return labels;
}

TopicModel::TopicModel(Vocabulary vocab, std::size_t num_topics, std::vector<double> topic_word,
                       std::optional<LdaTrainingInfo> training)
    : vocab_(std::move(vocab)),
      num_topics_(num_topics),
      topic_word_(std::move(topic_word)),
      labels_(lda_topic_labels(num_topics)),
      training_(std::move(training)) {
  if (num_topics_ == 0) throw ValidationError("topic model needs at least one topic");
  if (topic_word_.size() != num_topics_ * vocab_.size()) {
    throw InvariantError("topic-word matrix shape does not match T x V");
  }
}

std::span<const double> TopicModel::row(std::size_t topic) const {
  return std::span<const double>(topic_word_).subspan(topic * vocab_.size(), vocab_.size());
}

double TopicModel::probability(std::size_t topic, std::size_t word_id) const {
  return topic_word_.at(topic * vocab_.size() + word_id);
}

std::vector<std::pair<Word, double>> TopicModel::top_words(std::size_t topic, std::size_t k) const {
  auto r = row(topic);
  std::vector<std::size_t> ids(r.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  // Vocabulary ids are already in word order, so the id breaks ties.
  std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) { return r[a] > r[b]; });
  ids.resize(std::min(k, ids.size()));
  std::vector<std::pair<Word, double>> out;
  for (auto id : ids) out.emplace_back(vocab_.word(id), r[id]);
  return out;
}

std::set<Word> compute_stopwords(const CorpusCounts& counts, std::size_t k) {
  std::vector<std::pair<Word, std::size_t>> ranked(counts.word_count.begin(), counts.word_count.end());
  if (k > ranked.size()) {
    log::warn("stopword count " + std::to_string(k) + " exceeds vocabulary size " +
              std::to_string(ranked.size()) + "; every word becomes a stopword");
  }
  // word_count iterates in word order, so a stable sort keeps ties lexicographic.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::set<Word> out;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.insert(ranked[i].first);
  return out;
}

namespace {

void check_counts(const std::vector<std::vector<std::uint32_t>>& docs,
                  const std::vector<std::vector<std::uint16_t>>& z,
                  const std::vector<std::uint32_t>& word_topic,
                  const std::vector<std::uint32_t>& topic_total,
                  const std::vector<std::uint32_t>& doc_topic, std::size_t num_topics,
                  std::size_t vocab_size, std::size_t total_tokens) {
  std::vector<std::uint32_t> wt(vocab_size * num_topics, 0);
  std::vector<std::uint32_t> tt(num_topics, 0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::vector<std::uint32_t> dt(num_topics, 0);
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      ++wt[docs[d][i] * num_topics + z[d][i]];
      ++tt[z[d][i]];
      ++dt[z[d][i]];
    }
    if (!std::equal(dt.begin(), dt.end(), doc_topic.begin() + static_cast<long>(d * num_topics))) {
      throw InvariantError("Gibbs sampler: document-topic counts drifted in document " +
                           std::to_string(d));
    }
  }
  if (wt != word_topic) throw InvariantError("Gibbs sampler: topic-word counts drifted");
  if (tt != topic_total) throw InvariantError("Gibbs sampler: topic totals drifted");
  std::size_t sum = std::accumulate(word_topic.begin(), word_topic.end(), std::size_t{0});
  if (sum != total_tokens) {
    throw InvariantError("Gibbs sampler: topic-word counts sum to " + std::to_string(sum) +
                         ", expected " + std::to_string(total_tokens));
  }
}

}  // namespace

TopicModel lda_train(const std::vector<std::vector<Word>>& corpus, const LdaOptions& options) {
  const std::size_t T = options.num_topics;
  if (T < 2) throw ValidationError("LDA needs at least 2 topics");
  if (T > 65535) throw ValidationError("LDA supports at most 65535 topics");
  if (!(options.alpha > 0.0) || !std::isfinite(options.alpha)) {
    throw ValidationError("alpha must be a positive number");
  }
  if (!(options.beta > 0.0) || !std::isfinite(options.beta)) {
    throw ValidationError("beta must be a positive number");
  }
  if (options.iterations == 0) throw ValidationError("iterations must be positive");

  std::vector<Word> kept;
  for (const auto& doc : corpus) {
    for (const auto& w : doc) {
      if (!options.stopwords.contains(w)) kept.push_back(w);
    }
  }
  if (kept.empty()) throw ValidationError("every document is empty after stopword removal");
  Vocabulary vocab(std::move(kept));
  const std::size_t V = vocab.size();

  std::vector<std::vector<std::uint32_t>> docs;
  docs.reserve(corpus.size());
  std::size_t total_tokens = 0;
  for (const auto& doc : corpus) {
    std::vector<std::uint32_t> ids;
    for (const auto& w : doc) {
      if (options.stopwords.contains(w)) continue;
      ids.push_back(static_cast<std::uint32_t>(*vocab.id(w)));
    }
    total_tokens += ids.size();
    docs.push_back(std::move(ids));
  }

  const double alpha = options.alpha_mode == AlphaMode::kTotal
                           ? options.alpha / static_cast<double>(T)
                           : options.alpha;
  const double beta = options.beta;
  const double v_beta = static_cast<double>(V) * beta;

  Rng rng(options.seed);
  std::vector<std::uint32_t> word_topic(V * T, 0);
  std::vector<std::uint32_t> topic_total(T, 0);
  std::vector<std::uint32_t> doc_topic(docs.size() * T, 0);
  std::vector<std::vector<std::uint16_t>> z(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    z[d].resize(docs[d].size());
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      auto t = static_cast<std::uint16_t>(rng.below(T));
      z[d][i] = t;
      ++word_topic[docs[d][i] * T + t];
      ++topic_total[t];
      ++doc_topic[d * T + t];
    }
  }

#ifndef NDEBUG
  const bool verify = true;
#else
  const bool verify = options.verify_counts;
#endif

  std::vector<double> cumulative(T);
  for (std::size_t iter = 1; iter <= options.iterations; ++iter) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      std::uint32_t* dt = doc_topic.data() + d * T;
      for (std::size_t i = 0; i < docs[d].size(); ++i) {
        const std::size_t w = docs[d][i];
        std::uint32_t* wt = word_topic.data() + w * T;
        const std::size_t old = z[d][i];
        --wt[old];
        --topic_total[old];
        --dt[old];

        double total = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
          total += (dt[t] + alpha) * (wt[t] + beta) / (topic_total[t] + v_beta);
          cumulative[t] = total;
        }
        const double u = rng.uniform() * total;
        std::size_t t = 0;
        while (t + 1 < T && cumulative[t] <= u) ++t;

        z[d][i] = static_cast<std::uint16_t>(t);
        ++wt[t];
        ++topic_total[t];
        ++dt[t];
      }
    }

    std::size_t assigned = std::accumulate(topic_total.begin(), topic_total.end(), std::size_t{0});
    if (assigned != total_tokens) {
      throw InvariantError("Gibbs sampler: topic totals sum to " + std::to_string(assigned) +
                           ", expected " + std::to_string(total_tokens));
    }
    if (verify) check_counts(docs, z, word_topic, topic_total, doc_topic, T, V, total_tokens);
    if (options.observer) {
      options.observer(GibbsState{iter, T, V, total_tokens, word_topic, topic_total});
    }
    if (iter % 100 == 0) log::debug("lda: iteration " + std::to_string(iter));
  }

  std::vector<double> topic_word(T * V);
  for (std::size_t t = 0; t < T; ++t) {
    const double denom = topic_total[t] + v_beta;
    for (std::size_t w = 0; w < V; ++w) {
      topic_word[t * V + w] = (word_topic[w * T + t] + beta) / denom;
    }
  }

  LdaTrainingInfo info{options.alpha, options.beta, options.alpha_mode, options.iterations,
                       options.seed,
                       std::vector<Word>(options.stopwords.begin(), options.stopwords.end())};
  return TopicModel(std::move(vocab), T, std::move(topic_word), std::move(info));
}

std::vector<std::vector<Word>> read_corpus(std::istream& in) {
  std::vector<std::vector<Word>> docs;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<Word> doc;
    for (const auto& raw : split_whitespace(line)) {
      if (auto w = Word::from_raw(raw)) doc.push_back(std::move(*w));
    }
    docs.push_back(std::move(doc));
  }
  if (in.bad()) throw IoError("read failure while reading corpus");
  return docs;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

TopicModel read_topic_matrix(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::map<std::size_t, std::map<Word, double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = parse_csv_line(line);
    for (auto& f : fields) f = trim(f);
    if (!header) {
      if (fields != std::vector<std::string>{"topic_id", "word", "p_word_given_topic"}) {
        throw ValidationError("expected header topic_id,word,p_word_given_topic", source, line_no);
      }
      header = true;
      continue;
    }
    if (fields.size() != 3) throw ValidationError("expected 3 fields", source, line_no);
    std::size_t topic = 0;
    auto [tp, tec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), topic);
    if (tec != std::errc() || tp != fields[0].data() + fields[0].size()) {
      throw ValidationError("topic_id is not a non-negative integer", source, line_no);
    }
    auto word = Word::from_key(fields[1]);
    if (!word) throw ValidationError("word is empty after normalization", source, line_no);
    double p = 0.0;
    auto [pp, pec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), p);
    if (pec != std::errc() || pp != fields[2].data() + fields[2].size() || !std::isfinite(p) || p < 0.0) {
      throw ValidationError("p_word_given_topic must be a finite non-negative number", source, line_no);
    }
    if (!rows[topic].emplace(*word, p).second) {
      throw ValidationError("duplicate row for topic " + fields[0] + " word " + fields[1], source, line_no);
    }
  }
  if (in.bad()) throw IoError("read failure in " + source);
  if (!header || rows.empty()) throw ValidationError("topic matrix " + source + " has no rows");
  if (rows.rbegin()->first + 1 != rows.size()) {
    throw ValidationError("topic matrix " + source + ": topic ids must be 0..T-1 without gaps");
  }

  std::vector<Word> words;
  for (const auto& [t, row] : rows) {
    double sum = 0.0;
    for (const auto& [w, p] : row) {
      sum += p;
      words.push_back(w);
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw ValidationError("topic matrix " + source + ": topic " + std::to_string(t) +
                            " sums to " + format_double(sum) + ", expected 1");
    }
  }
  Vocabulary vocab(std::move(words));
  const std::size_t T = rows.size();
  std::vector<double> matrix(T * vocab.size(), 0.0);
  for (const auto& [t, row] : rows) {
    for (const auto& [w, p] : row) matrix[t * vocab.size() + *vocab.id(w)] = p;
  }
  return TopicModel(std::move(vocab), T, std::move(matrix));
}

void write_topic_matrix(std::ostream& out, const TopicModel& model) {
  out << "topic_id,word,p_word_given_topic\n";
  const auto& vocab = model.vocabulary();
  for (std::size_t t = 0; t < model.num_topics(); ++t) {
    auto r = model.row(t);
    for (std::size_t w = 0; w < vocab.size(); ++w) {
      out << t << ',' << csv_field(vocab.word(w).str()) << ',' << format_double(r[w]) << '\n';
    }
  }
}

void write_top_words(std::ostream& out, const TopicModel& model, std::size_t k) {
  for (std::size_t t = 0; t < model.num_topics(); ++t) {
    out << model.labels()[t] << '\t';
    auto top = model.top_words(t, k);
    for (std::size_t i = 0; i < top.size(); ++i) out << (i ? " " : "") << top[i].first.str();
    out << '\n';
  }
}

}  // namespace topex
