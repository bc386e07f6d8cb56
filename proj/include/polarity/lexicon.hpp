#ifndef POLARITY_LEXICON_HPP
#define POLARITY_LEXICON_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "polarity/context_type.hpp"
#include "polarity/corpus.hpp"

namespace polarity {

enum class EntryKind : unsigned char { Npi = 0, Licensor = 1 };

struct LexiconEntry {
  std::vector<std::string> phrase;  // lowercased, whitespace-free tokens
  EntryKind kind = EntryKind::Npi;
  ContextType context = ContextType::SimpleQuestions;  // meaningful iff Licensor

  std::string joined() const;
};

struct Match {
  std::size_t sentence_id = 0;
  std::size_t start = 0;  // 0-based token index
  std::size_t end = 0;    // exclusive
  const LexiconEntry* entry = nullptr;

  std::size_t length() const { return end - start; }
};

// Immutable after load; lookup is longest-match by first token.
class Lexicon {
 public:
  // One entry per line: phrase<TAB>kind[<TAB>context]; '#' starts a comment.
  static Lexicon load(std::istream& in);
  static Lexicon load_file(const std::string& path);
  static Lexicon load_files(const std::string& npi_path, const std::string& licensor_path);

  void add(LexiconEntry entry);  // deduplicates; throws FormatError on conflict

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<LexiconEntry>& entries() const { return entries_; }

  // Longest entry of `kind` whose phrase matches sentence tokens at `start`.
  const LexiconEntry* longest_at(const Sentence& s, std::size_t start, EntryKind kind) const;

 private:
  // entries_ is stable storage: index lists below point into it.
  std::vector<LexiconEntry> entries_;
  // first lowercased token -> entry indices, longest phrases first
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_token_;
};

// All maximal case-insensitive contiguous matches, left to right. Longest
// phrase wins at each start position per kind; a same-kind match starting
// inside a chosen match is suppressed. NPI and licensor matches may overlap
// each other freely.
std::vector<Match> find_matches(const Sentence& s, const Lexicon& lexicon);

}  // namespace polarity

#endif  // POLARITY_LEXICON_HPP
