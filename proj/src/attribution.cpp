#include "topex/attribution.hpp"

#include "topex/error.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

namespace topex {

using nlohmann::json;

double InstanceAttribution::token_total() const {
  double total = 0.0;
  for (const auto& t : tokens) total += t.score;
  return total;
}

void validate(const InstanceAttribution& instance) {
  if (!std::isfinite(instance.base_value)) {
    throw ValidationError("base_value: non-finite value");
  }
  for (std::size_t k = 0; k < instance.tokens.size(); ++k) {
    if (!std::isfinite(instance.tokens[k].score)) {
      throw ValidationError("tokens[" + std::to_string(k) + "].score: non-finite value");
    }
  }
  std::size_t next = 0;
  for (std::size_t j = 0; j < instance.word_groups.size(); ++j) {
    const auto& g = instance.word_groups[j];
    const std::string where = "word_groups[" + std::to_string(j) + "]";
    if (g.start >= g.end) throw ValidationError(where + ": empty span");
    if (g.start < next) throw ValidationError(where + ": overlaps previous group");
    if (g.start > next) {
      throw ValidationError(where + ": gap before token " + std::to_string(g.start));
    }
    if (g.end > instance.tokens.size()) {
      throw ValidationError(where + ": span ends past the last token");
    }
    next = g.end;
  }
  if (next != instance.tokens.size()) {
    throw ValidationError("word_groups: tokens from " + std::to_string(next) +
                          " on are not covered");
  }
}

WordLocalValues aggregate_tokens_to_words(const InstanceAttribution& instance) {
  WordLocalValues out{instance.instance_id, {}};
  out.values.reserve(instance.word_groups.size());
  for (const auto& g : instance.word_groups) {
    double v = 0.0;
    for (std::size_t k = g.start; k < g.end; ++k) v += instance.tokens[k].score;
    out.values.emplace_back(g.word, v);
  }
  return out;
}

std::vector<Word> instance_words(const InstanceAttribution& instance) {
  std::vector<Word> words;
  words.reserve(instance.word_groups.size());
  for (const auto& g : instance.word_groups) words.push_back(g.word);
  return words;
}

std::vector<WordGroup> word_groups_from_offsets(
    std::string_view text,
    const std::vector<std::pair<std::size_t, std::size_t>>& offsets) {
  // chunk[i] = index of the whitespace-delimited chunk containing byte i, -1 for whitespace.
  std::vector<long> chunk(text.size(), -1);
  long current = -1;
  bool in_word = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    bool space = std::isspace(static_cast<unsigned char>(text[i])) != 0;
    if (!space && !in_word) ++current;
    in_word = !space;
    if (!space) chunk[i] = current;
  }

  auto chunk_of = [&](std::size_t begin, std::size_t end) -> long {
    for (std::size_t i = begin; i < end && i < text.size(); ++i) {
      if (chunk[i] >= 0) return chunk[i];
    }
    return -1;
  };

  std::vector<WordGroup> groups;
  std::string surface;
  long open_chunk = -2;
  std::size_t open_start = 0;
  auto close = [&](std::size_t end) {
    if (open_chunk == -2) return;
    groups.push_back({Word::from_token(surface), open_start, end});
    surface.clear();
    open_chunk = -2;
  };

  for (std::size_t k = 0; k < offsets.size(); ++k) {
    auto [begin, end] = offsets[k];
    if (begin > end || end > text.size()) {
      throw ValidationError("token " + std::to_string(k) + ": offsets outside the text");
    }
    long c = chunk_of(begin, end);
    if (c < 0 || c != open_chunk) {
      close(k);
      open_chunk = c < 0 ? -1 : c;
      open_start = k;
    }
    surface.append(text.substr(begin, end - begin));
    if (c < 0) close(k + 1);
  }
  close(offsets.size());
  return groups;
}

std::vector<WordGroup> word_groups_per_token(const std::vector<TokenAttribution>& tokens) {
  std::vector<WordGroup> groups;
  groups.reserve(tokens.size());
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    groups.push_back({Word::from_token(tokens[k].text), k, k + 1});
  }
  return groups;
}

namespace {

const json& field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw ValidationError(std::string("missing field \"") + name + "\"");
  return *it;
}

std::string string_field(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_string()) throw ValidationError(std::string(name) + ": expected a string");
  return v.get<std::string>();
}

double number_field(const json& obj, const char* name, const std::string& where) {
  const json& v = field(obj, name);
  if (!v.is_number()) throw ValidationError(where + name + ": expected a finite number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(where + name + ": non-finite value");
  return d;
}

std::size_t index_field(const json& obj, const char* name, const std::string& where) {
  const json& v = field(obj, name);
  if (!v.is_number_unsigned()) {
    throw ValidationError(where + name + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

InstanceAttribution parse_record(const json& rec) {
  if (!rec.is_object()) throw ValidationError("record is not a JSON object");
  InstanceAttribution inst;
  inst.instance_id = string_field(rec, "instance_id");
  inst.class_label = string_field(rec, "class_label");
  inst.base_value = number_field(rec, "base_value", "");

  const json& tokens = field(rec, "tokens");
  if (!tokens.is_array()) throw ValidationError("tokens: expected an array");
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const std::string where = "tokens[" + std::to_string(k) + "].";
    const json& t = tokens[k];
    if (!t.is_object()) throw ValidationError(where + ": expected an object");
    const json& text = field(t, "text");
    if (!text.is_string()) throw ValidationError(where + "text: expected a string");
    inst.tokens.push_back({text.get<std::string>(), number_field(t, "score", where)});
  }

  const json& groups = field(rec, "word_groups");
  if (!groups.is_array()) throw ValidationError("word_groups: expected an array");
  for (std::size_t j = 0; j < groups.size(); ++j) {
    const std::string where = "word_groups[" + std::to_string(j) + "].";
    const json& g = groups[j];
    if (!g.is_object()) throw ValidationError(where + ": expected an object");
    std::size_t start = index_field(g, "start", where);
    std::size_t end = index_field(g, "end", where);
    const json& w = field(g, "word");
    WordGroup group{Word::punct(), start, end};
    if (w.is_null()) {
      if (start < end && end <= inst.tokens.size()) {
        std::string surface;
        for (std::size_t k = start; k < end; ++k) surface += inst.tokens[k].text;
        group.word = Word::from_token(surface);
      }
    } else if (w.is_string()) {
      auto parsed = Word::from_key(w.get<std::string>());
      group.word = parsed ? *parsed : Word::punct();
    } else {
      throw ValidationError(where + "word: expected a string or null");
    }
    inst.word_groups.push_back(std::move(group));
  }
  validate(inst);
  return inst;
}

}  // namespace

IngestResult ingest_attributions(std::istream& in, const IngestOptions& options) {
  IngestResult result;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
      }
      InstanceAttribution inst = parse_record(rec);
      if (!seen.emplace(inst.instance_id, inst.class_label).second) {
        throw ValidationError("duplicate instance_id \"" + inst.instance_id +
                              "\" for class \"" + inst.class_label + "\"");
      }
      result.instances.push_back(std::move(inst));
    } catch (const ValidationError& e) {
      ValidationError located(e.what(), options.source, line_no);
      if (!options.lenient) throw located;
      result.skipped.emplace_back(located.what());
    }
  }
  if (in.bad()) throw IoError("read failure in " + options.source);
  return result;
}

std::string to_jsonl_record(const InstanceAttribution& instance) {
  json tokens = json::array();
  for (const auto& t : instance.tokens) tokens.push_back({{"text", t.text}, {"score", t.score}});
  json groups = json::array();
  for (const auto& g : instance.word_groups) {
    groups.push_back({{"word", g.word.str()}, {"start", g.start}, {"end", g.end}});
  }
  json rec = {{"instance_id", instance.instance_id},
              {"class_label", instance.class_label},
              {"base_value", instance.base_value},
              {"tokens", std::move(tokens)},
              {"word_groups", std::move(groups)}};
  return rec.dump();
}

void write_attributions(std::ostream& out, const std::vector<InstanceAttribution>& instances) {
  for (const auto& inst : instances) out << to_jsonl_record(inst) << '\n';
}

std::vector<InstanceAttribution> filter_by_class(
    const std::vector<InstanceAttribution>& instances, std::string_view class_label) {
  std::vector<InstanceAttribution> out;
  for (const auto& inst : instances) {
    if (inst.class_label == class_label) out.push_back(inst);
  }
  return out;
}

std::pair<Vocabulary, CorpusCounts> build_vocabulary(
    const std::vector<InstanceAttribution>& instances) {
  std::vector<std::vector<Word>> docs;
  docs.reserve(instances.size());
  for (const auto& inst : instances) docs.push_back(instance_words(inst));
  return build_vocabulary(std::span<const std::vector<Word>>(docs));
}

}  // namespace topex
