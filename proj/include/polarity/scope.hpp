#ifndef POLARITY_SCOPE_HPP
#define POLARITY_SCOPE_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "polarity/context_type.hpp"
#include "polarity/corpus.hpp"
#include "polarity/lexicon.hpp"

namespace polarity {

// One licensed NPI occurrence. Matches are stored by value (span + surface
// text) so occurrences outlive the lexicon they came from.
struct OccurrenceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;  // lowercased surface, space-joined

  bool operator==(const OccurrenceSpan&) const = default;
};

struct LicensedOccurrence {
  std::size_t sentence_id = 0;
  OccurrenceSpan npi;
  OccurrenceSpan licensor;
  ContextType context = ContextType::SimpleQuestions;
  std::size_t tree_distance = 0;

  bool operator==(const LicensedOccurrence&) const = default;
};

struct FrequencyTable {
  std::array<std::size_t, kContextCount> counts{};
  std::size_t sentence_count = 0;

  // occurrences per 100k sentences, rounded to nearest
  std::size_t per_100k(ContextType c) const;
};

// Length of the undirected path between tokens i and j (0-based) in the
// dependency forest; nullopt when they sit in different components.
std::optional<std::size_t> tree_distance(const Sentence& s, std::size_t i, std::size_t j);

// The span's head-most token: the token whose head lies outside the span
// (leftmost on ties). Anchor for phrase-level tree distances.
std::size_t span_anchor(const Sentence& s, std::size_t start, std::size_t end);

// For each NPI match, picks the single preceding, tree-reachable licensor
// with minimal tree distance (ties: linear distance, then leftmost).
std::vector<LicensedOccurrence> link_licensors(const Sentence& s, const std::vector<Match>& matches);

struct ScanResult {
  std::vector<LicensedOccurrence> occurrences;
  FrequencyTable table;
};

// link_licensors over every sentence, in order. Throws CapabilityError on an
// unparsed corpus.
ScanResult scan_corpus(const Corpus& corpus, const Lexicon& lexicon);

// Fraction of gold NPIs whose predicted licensor span matches gold. The
// caller restricts gold to multi-licensor sentences.
double licensor_selection_precision(const Corpus& corpus, const Lexicon& lexicon,
                                    const std::vector<LicensedOccurrence>& gold);

// occurrence record I/O: JSON-lines and the Table-1-style frequency CSV
void write_occurrences_jsonl(const std::vector<LicensedOccurrence>& occ, std::ostream& out,
                             bool gold = false);
std::vector<LicensedOccurrence> read_occurrences_jsonl(std::istream& in);
void write_frequency_csv(const FrequencyTable& table, std::ostream& out);
FrequencyTable read_frequency_csv(std::istream& in);

}  // namespace polarity

#endif  // POLARITY_SCOPE_HPP
