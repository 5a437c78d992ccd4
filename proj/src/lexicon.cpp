#include "topex/lexicon.hpp"

#include "topex/error.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <set>

namespace topex {

namespace {

void add_unique(std::vector<std::size_t>& into, const std::vector<std::size_t>& from) {
  into.insert(into.end(), from.begin(), from.end());
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end()), into.end());
}

std::vector<std::string> fields_of(const std::string& line) {
  return split_whitespace(line);
}

bool parse_id(const std::string& text, long& id) {
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
  return ec == std::errc() && p == text.data() + text.size();
}

}  // namespace

Lexicon::Lexicon(std::vector<std::string> categories, std::vector<Entry> entries)
    : categories_(std::move(categories)), entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    auto& index = e.prefix ? prefix_ : exact_;
    add_unique(index[e.pattern], e.categories);
  }
}

std::vector<std::size_t> Lexicon::match(const Word& word) const {
  std::vector<std::size_t> out;
  const std::string& s = word.str();
  if (auto it = exact_.find(s); it != exact_.end()) add_unique(out, it->second);
  // Every byte prefix of s that is a stored stem matches.
  for (std::size_t len = 1; len <= s.size(); ++len) {
    if (auto it = prefix_.find(s.substr(0, len)); it != prefix_.end()) add_unique(out, it->second);
  }
  return out;
}

Lexicon parse_lexicon(std::istream& in, const std::string& source) {
  enum class Section { kBeforeHeader, kHeader, kWords } section = Section::kBeforeHeader;
  std::vector<std::string> categories;
  std::map<long, std::size_t> id_to_index;
  std::set<std::string> names;
  std::vector<Lexicon::Entry> entries;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = fields_of(line);
    if (fields.empty()) continue;
    if (fields.size() == 1 && fields[0] == "%") {
      if (section == Section::kBeforeHeader) {
        section = Section::kHeader;
      } else if (section == Section::kHeader) {
        section = Section::kWords;
      } else {
        throw ValidationError("unexpected third \"%\" delimiter", source, line_no);
      }
      continue;
    }
    switch (section) {
      case Section::kBeforeHeader:
        throw ValidationError("lexicon must start with a \"%\" line", source, line_no);
      case Section::kHeader: {
        long id = 0;
        if (fields.size() != 2 || !parse_id(fields[0], id)) {
          throw ValidationError("malformed category line, expected \"<id> <NAME>\"", source, line_no);
        }
        if (id_to_index.contains(id)) {
          throw ValidationError("duplicate category id " + fields[0], source, line_no);
        }
        if (!names.insert(fields[1]).second) {
          throw ValidationError("duplicate category name " + fields[1], source, line_no);
        }
        id_to_index[id] = categories.size();
        categories.push_back(fields[1]);
        break;
      }
      case Section::kWords: {
        if (fields.size() < 2) {
          throw ValidationError("malformed word line, expected \"<pattern> <id>...\"", source, line_no);
        }
        Lexicon::Entry entry;
        std::string pattern = fields[0];
        if (pattern.back() == '*') {
          entry.prefix = true;
          pattern.pop_back();
        }
        entry.pattern = fold_case(pattern);
        if (entry.pattern.empty()) throw ValidationError("empty pattern", source, line_no);
        for (std::size_t i = 1; i < fields.size(); ++i) {
          long id = 0;
          if (!parse_id(fields[i], id)) {
            throw ValidationError("category id \"" + fields[i] + "\" is not an integer", source, line_no);
          }
          auto it = id_to_index.find(id);
          if (it == id_to_index.end()) {
            throw ValidationError("unknown category id " + fields[i], source, line_no);
          }
          entry.categories.push_back(it->second);
        }
        std::sort(entry.categories.begin(), entry.categories.end());
        entry.categories.erase(std::unique(entry.categories.begin(), entry.categories.end()),
                               entry.categories.end());
        entries.push_back(std::move(entry));
        break;
      }
    }
  }
  if (in.bad()) throw IoError("read failure in " + source);
  if (section != Section::kWords) {
    throw ValidationError("lexicon " + (source.empty() ? std::string("<input>") : source) +
                          ": header block is not closed by a \"%\" line");
  }
  return Lexicon(std::move(categories), std::move(entries));
}

}  // namespace topex
