#pragma once

#include "topex/text.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace topex {

/// A flat LIWC-style lexicon: named categories and word patterns. A pattern
/// ending in '*' matches every word with that prefix.
class Lexicon {
 public:
  struct Entry {
    std::string pattern;  // case-folded, without the trailing '*'
    bool prefix = false;
    std::vector<std::size_t> categories;  // indices into categories()
  };

  Lexicon(std::vector<std::string> categories, std::vector<Entry> entries);

  const std::vector<std::string>& categories() const noexcept { return categories_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// Union of the categories of every pattern matching `word`, ascending.
  std::vector<std::size_t> match(const Word& word) const;

 private:
  std::vector<std::string> categories_;
  std::vector<Entry> entries_;
  std::map<std::string, std::vector<std::size_t>> exact_;
  std::map<std::string, std::vector<std::size_t>> prefix_;
};

/// Parses the .dic layout: a "%"-delimited header of "<id> <NAME>" lines,
/// then "<pattern> <id> [<id>...]" lines. Errors carry line numbers.
Lexicon parse_lexicon(std::istream& in, const std::string& source = "");

}  // namespace topex
