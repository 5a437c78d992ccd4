#include "topex/text.hpp"

#include "topex/error.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>

namespace topex {

namespace {

icu::UnicodeString nfc(const icu::UnicodeString& in) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw InvariantError("ICU NFC normalizer unavailable");
  icu::UnicodeString out = normalizer->normalize(in, status);
  if (U_FAILURE(status)) throw InvariantError("ICU NFC normalization failed");
  return out;
}

icu::UnicodeString folded(std::string_view raw) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  s = nfc(s);
  s.toLower(icu::Locale::getRoot());
  // Lowercasing can produce sequences that are no longer composed.
  return nfc(s);
}

bool is_edge(UChar32 c) { return u_ispunct(c) || u_isUWhiteSpace(c); }

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

}  // namespace

std::string fold_case(std::string_view raw) { return to_utf8(folded(raw)); }

std::string normalize_word(std::string_view raw) {
  icu::UnicodeString s = folded(raw);
  int32_t begin = 0;
  int32_t end = s.length();
  while (begin < end) {
    UChar32 c = s.char32At(begin);
    if (!is_edge(c)) break;
    begin += U16_LENGTH(c);
  }
  while (end > begin) {
    int32_t prev = s.moveIndex32(end, -1);
    if (!is_edge(s.char32At(prev))) break;
    end = prev;
  }
  return to_utf8(s.tempSubStringBetween(begin, end));
}

std::optional<Word> Word::from_raw(std::string_view raw) {
  std::string n = normalize_word(raw);
  if (n.empty()) return std::nullopt;
  return Word(std::move(n));
}

Word Word::from_token(std::string_view raw) {
  auto w = from_raw(raw);
  return w ? *w : punct();
}

std::optional<Word> Word::from_key(std::string_view key) {
  if (key == kPunctSurface) return punct();
  return from_raw(key);
}

Word Word::punct() { return Word(std::string(kPunctSurface)); }

Vocabulary::Vocabulary(std::vector<Word> words) : words_(std::move(words)) {
  std::sort(words_.begin(), words_.end());
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
}

std::optional<std::size_t> Vocabulary::id(const Word& w) const {
  auto it = std::lower_bound(words_.begin(), words_.end(), w);
  if (it == words_.end() || *it != w) return std::nullopt;
  return static_cast<std::size_t>(it - words_.begin());
}

std::size_t CorpusCounts::count(const Word& w) const {
  auto it = word_count.find(w);
  return it == word_count.end() ? 0 : it->second;
}

std::pair<Vocabulary, CorpusCounts> build_vocabulary(
    std::span<const std::vector<Word>> documents) {
  CorpusCounts counts;
  for (const auto& doc : documents) {
    for (const auto& w : doc) {
      ++counts.word_count[w];
      ++counts.total;
    }
  }
  if (counts.total == 0) throw ValidationError("empty corpus: no words to build a vocabulary from");
  std::vector<Word> words;
  words.reserve(counts.word_count.size());
  for (const auto& [w, _] : counts.word_count) words.push_back(w);
  return {Vocabulary(std::move(words)), std::move(counts)};
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  int32_t start = -1;
  while (i < length) {
    int32_t at = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    bool space = c >= 0 && u_isUWhiteSpace(c);
    if (space) {
      if (start >= 0) out.emplace_back(text.substr(start, at - start));
      start = -1;
    } else if (start < 0) {
      start = at;
    }
  }
  if (start >= 0) out.emplace_back(text.substr(start));
  return out;
}

}  // namespace topex
