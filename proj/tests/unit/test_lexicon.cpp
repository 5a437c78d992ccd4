#include "topex/error.hpp"
#include "topex/lexicon.hpp"

#include <doctest.h>

#include <sstream>

using namespace topex;

namespace {

Lexicon parse(const std::string& text) {
  std::istringstream in(text);
  return parse_lexicon(in, "test.dic");
}

std::vector<std::string> categories_of(const Lexicon& lex, const char* word) {
  std::vector<std::string> out;
  for (auto c : lex.match(*Word::from_raw(word))) out.push_back(lex.categories()[c]);
  return out;
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ValidationError& e) {
    return e.line() ? static_cast<int>(*e.line()) : -1;
  }
  return 0;
}

}  // namespace

TEST_CASE("word in two categories") {
  auto lex = parse("%\n1\tNEGEMO\n2\tANX\n%\nafraid\t1 2\n");
  CHECK(lex.categories() == std::vector<std::string>{"NEGEMO", "ANX"});
  CHECK(categories_of(lex, "afraid") == std::vector<std::string>{"NEGEMO", "ANX"});
  CHECK(categories_of(lex, "Afraid") == std::vector<std::string>{"NEGEMO", "ANX"});
  CHECK(categories_of(lex, "brave").empty());
}

TEST_CASE("prefix patterns") {
  auto lex = parse("%\n1 NEGEMO\n%\nterrif* 1\n");
  CHECK(categories_of(lex, "terrified") == std::vector<std::string>{"NEGEMO"});
  CHECK(categories_of(lex, "terrific") == std::vector<std::string>{"NEGEMO"});
  CHECK(categories_of(lex, "terrif") == std::vector<std::string>{"NEGEMO"});
  CHECK(categories_of(lex, "terr").empty());
}

TEST_CASE("all matching patterns are unioned") {
  auto lex = parse("%\n1 A\n2 B\n3 C\n%\nterrif* 1\nterrific 2\nt* 1\nte* 3\n");
  CHECK(categories_of(lex, "terrific") == std::vector<std::string>{"A", "B", "C"});
  CHECK(categories_of(lex, "terrified") == std::vector<std::string>{"A", "C"});
  CHECK(categories_of(lex, "tx") == std::vector<std::string>{"A"});
}

TEST_CASE("blank lines are ignored and ids need not be contiguous") {
  auto lex = parse("\n%\n10 POS\n\n20 NEG\n%\n\ngood 10\nbad 20\n");
  CHECK(categories_of(lex, "good") == std::vector<std::string>{"POS"});
  CHECK(categories_of(lex, "bad") == std::vector<std::string>{"NEG"});
}

TEST_CASE("lexicon errors carry line numbers") {
  CHECK(error_line("%\n1 NEGEMO\n%\nafraid X\n") == 4);
  CHECK(error_line("%\n1 NEGEMO\n%\nafraid 2\n") == 4);
  CHECK(error_line("%\n1 NEGEMO\n1 POSEMO\n%\n") == 3);
  CHECK(error_line("%\n1 NEGEMO\n2 NEGEMO\n%\n") == 3);
  CHECK(error_line("%\n1 NEGEMO\n%\nafraid\n") == 4);
  CHECK(error_line("%\nNEGEMO\n%\n") == 2);
  CHECK(error_line("afraid 1\n") == 1);
  CHECK(error_line("%\n1 NEGEMO\n") != 0);

  try {
    parse("%\n1 NEGEMO\n%\nafraid X\n");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("test.dic:4") != std::string::npos);
  }
}
