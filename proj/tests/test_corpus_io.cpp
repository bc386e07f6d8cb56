#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "polarity/corpus.hpp"
#include "polarity/error.hpp"
#include "polarity/rng.hpp"

using namespace polarity;

namespace {

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

std::string two_token_conllu() {
  return
      "1\tNo\t_\t_\t_\t_\t2\tdet\t_\t_\n"
      "2\tone\t_\t_\t_\t_\t0\troot\t_\t_\n"
      "\n";
}

}  // namespace

TEST_CASE("parse_conllu: minimal two-token sentence") {
  std::istringstream in(two_token_conllu());
  Corpus c = parse_conllu(in);
  REQUIRE(c.sentences.size() == 1);
  CHECK(c.token_count == 2);
  CHECK(c.sentences[0].tokens[0].form == "No");
  CHECK(c.sentences[0].tokens[0].lower == "no");
  CHECK(c.sentences[0].tokens[0].head == 2);
  CHECK(c.sentences[0].tokens[0].deprel == "det");
  CHECK(c.sentences[0].tokens[1].head == 0);
  CHECK(c.parsed);
}

TEST_CASE("parse_conllu: empty input gives empty corpus") {
  std::istringstream in("");
  Corpus c = parse_conllu(in);
  CHECK(c.sentences.empty());
  CHECK(c.token_count == 0);
}

TEST_CASE("parse_conllu: fixture token count matches hand count") {
  Corpus c = parse_conllu_file(fixture("sample10.conllu"));
  CHECK(c.sentences.size() == 10);
  // 53 lines with a plain integer id; MWT "2-3" and empty node "4.1" skipped
  CHECK(c.token_count == 53);
  CHECK(c.sentences[6].tokens.size() == 4);   // MWT line dropped
  CHECK(c.sentences[9].tokens.size() == 7);   // empty node dropped
  for (std::size_t i = 0; i < c.sentences.size(); ++i) {
    CHECK(c.sentences[i].id == i);
  }
}

TEST_CASE("parse_conllu: acyclicity holds on every parsed sentence") {
  Corpus c = parse_conllu_file(fixture("sample10.conllu"));
  for (const Sentence& s : c.sentences) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      int cur = static_cast<int>(i) + 1;
      std::size_t steps = 0;
      while (cur != 0) {
        cur = s.tokens[static_cast<std::size_t>(cur - 1)].head;
        ++steps;
        REQUIRE(steps <= s.tokens.size());
      }
    }
  }
}

TEST_CASE("write_conllu round-trips") {
  SUBCASE("two-token sentence") {
    std::istringstream in(two_token_conllu());
    Corpus c = parse_conllu(in);
    std::istringstream again(write_conllu(c));
    CHECK(parse_conllu(again) == c);
  }
  SUBCASE("ten-sentence fixture") {
    Corpus c = parse_conllu_file(fixture("sample10.conllu"));
    std::istringstream again(write_conllu(c));
    CHECK(parse_conllu(again) == c);
  }
  SUBCASE("empty corpus gives empty stream") {
    Corpus c;
    CHECK(write_conllu(c).empty());
  }
}

TEST_CASE("parse-write-parse is idempotent canonicalization") {
  std::ifstream raw(fixture("sample10.conllu"));
  Corpus first = parse_conllu(raw);
  std::istringstream second_in(write_conllu(first));
  Corpus second = parse_conllu(second_in);
  std::istringstream third_in(write_conllu(second));
  CHECK(parse_conllu(third_in) == second);
  CHECK(second == first);
}

TEST_CASE("parse_conllu error reporting") {
  SUBCASE("wrong column count names the line") {
    std::istringstream in("1\tword\tonly-three\n");
    CHECK_THROWS_WITH_AS(parse_conllu(in), doctest::Contains("line 1"), ParseError);
  }
  SUBCASE("head out of range") {
    std::istringstream in("1\tword\t_\t_\t_\t_\t5\tdet\t_\t_\n\n");
    CHECK_THROWS_AS(parse_conllu(in), StructureError);
  }
  SUBCASE("self-loop head") {
    std::istringstream in("1\tword\t_\t_\t_\t_\t1\tdet\t_\t_\n\n");
    CHECK_THROWS_AS(parse_conllu(in), StructureError);
  }
  SUBCASE("two-token cycle") {
    std::istringstream in(
        "1\ta\t_\t_\t_\t_\t2\tdep\t_\t_\n"
        "2\tb\t_\t_\t_\t_\t1\tdep\t_\t_\n\n");
    CHECK_THROWS_AS(parse_conllu(in), StructureError);
  }
  SUBCASE("ids out of sequence") {
    std::istringstream in(
        "1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n"
        "3\tb\t_\t_\t_\t_\t1\tdep\t_\t_\n\n");
    CHECK_THROWS_AS(parse_conllu(in), ParseError);
  }
}

TEST_CASE("tokenize_plain") {
  SUBCASE("single sentence") {
    std::istringstream in("Bill did n't buy any books\n");
    Corpus c = tokenize_plain(in);
    REQUIRE(c.sentences.size() == 1);
    CHECK(c.sentences[0].tokens.size() == 6);
    CHECK(c.sentences[0].tokens[2].form == "n't");
    CHECK(c.sentences[0].tokens[0].head == 0);
    CHECK(c.sentences[0].tokens[0].deprel == "_");
    CHECK_FALSE(c.parsed);
  }
  SUBCASE("blank lines are skipped, not empty sentences") {
    std::istringstream in("one line\n\n   \nanother line here\n");
    Corpus c = tokenize_plain(in);
    CHECK(c.sentences.size() == 2);
    CHECK(c.sentences[1].tokens.size() == 3);
  }
  SUBCASE("three lines keep file order") {
    std::istringstream in("a b\nc d\ne f\n");
    Corpus c = tokenize_plain(in);
    REQUIRE(c.sentences.size() == 3);
    CHECK(c.sentences[0].tokens[0].form == "a");
    CHECK(c.sentences[1].tokens[0].form == "c");
    CHECK(c.sentences[2].tokens[0].form == "e");
    CHECK(c.token_count == 6);
  }
}

TEST_CASE("random corpora survive a write/parse round trip") {
  Rng rng(7);
  const char* words[] = {"alpha", "beta", "Gamma", "DELTA", "epsilon"};
  for (int rep = 0; rep < 50; ++rep) {
    Corpus c;
    const std::size_t n = 1 + rng.uniform_index(6);
    for (std::size_t s = 0; s < n; ++s) {
      Sentence sent;
      sent.id = s;
      const std::size_t len = 1 + rng.uniform_index(8);
      for (std::size_t i = 0; i < len; ++i) {
        Token t;
        t.form = words[rng.uniform_index(5)];
        t.lower = case_fold(t.form);
        // heads pointing left (or root) can never form a cycle
        t.head = static_cast<int>(rng.uniform_index(i + 1));
        t.deprel = i == 0 ? "root" : "dep";
        sent.tokens.push_back(t);
      }
      c.token_count += len;
      c.sentences.push_back(std::move(sent));
    }
    std::istringstream in(write_conllu(c));
    CHECK(parse_conllu(in) == c);
  }
}
