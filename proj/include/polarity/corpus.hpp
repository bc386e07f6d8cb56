#ifndef POLARITY_CORPUS_HPP
#define POLARITY_CORPUS_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace polarity {

struct Token {
  std::string form;
  std::string lower;   // case-folded form; all matching runs on this
  int head = 0;        // 1-based index of governing token, 0 = root
  std::string deprel = "_";

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::size_t id = 0;  // ordinal position in the corpus
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const Sentence&) const = default;
};

struct Corpus {
  std::vector<Sentence> sentences;
  std::size_t token_count = 0;
  bool parsed = true;  // false when heads are tokenize_plain placeholders

  std::size_t size() const { return sentences.size(); }
  bool operator==(const Corpus&) const = default;
};

// Simple byte-wise ASCII case fold, applied once at parse time.
std::string case_fold(std::string_view form);

// Checks head-range, self-loop and acyclicity invariants for one sentence.
// Multiple roots are accepted (forest); throws StructureError on violation.
void validate_sentence(const Sentence& s);

// CoNLL-U ingestion. Multiword-token ranges ("3-4") and empty nodes ("3.1")
// are skipped; comment lines start with '#'. Throws ParseError with a line
// number on malformed lines and StructureError on bad head links.
Corpus parse_conllu(std::istream& in);
Corpus parse_conllu_file(const std::string& path);

// Canonical serialization: tab separators, LF endings, "_" for fields
// outside the data model. parse(write(c)) == c for every valid corpus.
void write_conllu(const Corpus& c, std::ostream& out);
std::string write_conllu(const Corpus& c);
void write_conllu_file(const Corpus& c, const std::string& path);

// One sentence per line, whitespace tokens, head 0 placeholders. Blank lines
// are skipped. The result is flagged unparsed.
Corpus tokenize_plain(std::istream& in);

}  // namespace polarity

#endif  // POLARITY_CORPUS_HPP
