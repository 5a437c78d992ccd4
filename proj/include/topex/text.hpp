#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace topex {

/// Canonical word identity shared by attribution, topic models and lexicons.
///
/// A word is NFC-normalized, lowercased, and has leading/trailing punctuation
/// and whitespace removed. Interior punctuation ("don't") is kept. Tokens that
/// normalize to nothing map to the reserved punctuation word.
class Word {
 public:
  /// Surface form of the reserved punctuation word in files and reports.
  static constexpr std::string_view kPunctSurface = "⟨punct⟩";

  /// Normalizes `raw`; std::nullopt when nothing remains.
  static std::optional<Word> from_raw(std::string_view raw);

  /// Like from_raw, but maps empty results to the punctuation word.
  static Word from_token(std::string_view raw);

  /// Parses a stored key: the reserved surface form or a raw word.
  static std::optional<Word> from_key(std::string_view key);

  static Word punct();

  const std::string& str() const noexcept { return surface_; }
  bool is_punct() const noexcept { return surface_ == kPunctSurface; }

  auto operator<=>(const Word&) const = default;

 private:
  explicit Word(std::string surface) : surface_(std::move(surface)) {}
  std::string surface_;
};

/// NFC + lowercase + edge punctuation/whitespace strip. Empty string means
/// nothing remained.
std::string normalize_word(std::string_view raw);

/// NFC + lowercase only. Used for lexicon patterns, where punctuation
/// stripping would change prefix semantics.
std::string fold_case(std::string_view raw);

/// Lexicographically ordered set of words with dense ids in [0, size()).
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<Word> words);

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  const Word& word(std::size_t id) const { return words_.at(id); }
  std::span<const Word> words() const noexcept { return words_; }
  std::optional<std::size_t> id(const Word& w) const;
  bool contains(const Word& w) const { return id(w).has_value(); }

 private:
  std::vector<Word> words_;
};

struct CorpusCounts {
  std::map<Word, std::size_t> word_count;
  std::size_t total = 0;

  std::size_t count(const Word& w) const;
};

/// Builds vocabulary and occurrence counts from word sequences.
/// Throws ValidationError when no words are present.
std::pair<Vocabulary, CorpusCounts> build_vocabulary(
    std::span<const std::vector<Word>> documents);

/// Splits on Unicode whitespace.
std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace topex

template <>
struct std::hash<topex::Word> {
  std::size_t operator()(const topex::Word& w) const noexcept {
    return std::hash<std::string>{}(w.str());
  }
};
