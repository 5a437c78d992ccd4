#pragma once

#include "topex/text.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace topex {

struct TokenAttribution {
  std::string text;
  double score = 0.0;

  bool operator==(const TokenAttribution&) const = default;
};

/// A word covering the contiguous token range [start, end).
struct WordGroup {
  Word word;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const WordGroup&) const = default;
};

/// Attributions for one (input, explained class) pair.
struct InstanceAttribution {
  std::string instance_id;
  std::string class_label;
  double base_value = 0.0;  // model output on the fully masked input
  std::vector<TokenAttribution> tokens;
  std::vector<WordGroup> word_groups;

  double token_total() const;

  bool operator==(const InstanceAttribution&) const = default;
};

/// Word-level local values of one instance, in word order.
struct WordLocalValues {
  std::string instance_id;
  std::vector<std::pair<Word, double>> values;
};

/// Throws ValidationError on non-finite numbers or word groups that do not
/// partition the token range.
void validate(const InstanceAttribution& instance);

/// Sums token scores inside each word group. Punctuation-only groups are
/// reported under Word::punct().
WordLocalValues aggregate_tokens_to_words(const InstanceAttribution& instance);

/// The word sequence of an instance (one entry per word group).
std::vector<Word> instance_words(const InstanceAttribution& instance);

/// Groups tokens into whitespace-delimited words of `text` using the tokens'
/// byte offsets [begin, end). Tokens covering only whitespace get their own
/// punctuation group.
std::vector<WordGroup> word_groups_from_offsets(
    std::string_view text,
    const std::vector<std::pair<std::size_t, std::size_t>>& offsets);

/// One group per token, word derived from the token text.
std::vector<WordGroup> word_groups_per_token(
    const std::vector<TokenAttribution>& tokens);

struct IngestOptions {
  bool lenient = false;       // skip bad records instead of aborting
  std::string source = "";    // file name used in diagnostics
};

struct IngestResult {
  std::vector<InstanceAttribution> instances;
  std::vector<std::string> skipped;  // one located diagnostic per skipped line
};

/// Reads the JSONL attribution format. Every diagnostic names the line.
IngestResult ingest_attributions(std::istream& in, const IngestOptions& options = {});

/// Writes one JSON record per line. Words are always written explicitly.
void write_attributions(std::ostream& out, const std::vector<InstanceAttribution>& instances);

std::string to_jsonl_record(const InstanceAttribution& instance);

/// Keeps the instances explaining `class_label`.
std::vector<InstanceAttribution> filter_by_class(
    const std::vector<InstanceAttribution>& instances, std::string_view class_label);

std::pair<Vocabulary, CorpusCounts> build_vocabulary(
    const std::vector<InstanceAttribution>& instances);

}  // namespace topex
