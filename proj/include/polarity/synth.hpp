#ifndef POLARITY_SYNTH_HPP
#define POLARITY_SYNTH_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polarity/context_type.hpp"
#include "polarity/corpus.hpp"
#include "polarity/lexicon.hpp"
#include "polarity/scope.hpp"

namespace polarity {

// A sentence frame with hand-assigned gold head links. Heads are 1-based
// placeholder positions; multiword slot expansions remap them and attach
// their extra tokens under the slot's first token.
struct SynthFrame {
  struct Slot {
    enum class Kind { Literal, Filler, Licensor, Npi, Licensor1, Licensor2 };
    Kind kind = Kind::Literal;
    std::string text;  // literal form or filler name
    int head = 0;      // 1-based placeholder index, 0 = root
    std::string deprel = "_";
    ContextType multi_context = ContextType::SimpleQuestions;  // for Licensor1/2
  };
  std::vector<Slot> slots;

  void validate() const;  // single root, acyclic, slot arity
};

struct ContextGrammar {
  double freq_per_100k = 0.0;
  std::vector<std::vector<std::string>> licensors;  // token sequences
  std::vector<std::vector<std::string>> npis;
  std::vector<SynthFrame> frames;  // one {lic}, one {npi} each
};

// Grammar for controlled corpora: per-context frames with target
// frequencies, neutral frames, shared filler inventories, and optional
// multi-licensor frames for the selection-heuristic suite.
struct GrammarSpec {
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::vector<std::string>> fillers;
  std::vector<SynthFrame> neutral_frames;
  std::map<ContextType, ContextGrammar> contexts;
  std::vector<SynthFrame> multi_frames;               // {lic1=ctx} {lic2=ctx} {npi}
  std::vector<std::vector<std::string>> multi_npis;

  static GrammarSpec load(std::istream& in);
  static GrammarSpec load_file(const std::string& path);

  void validate() const;  // throws FormatError / StructureError
  std::size_t vocab_size() const;
};

struct GoldAnnotation {
  std::size_t sentence_id = 0;
  std::vector<LicensedOccurrence> occurrences;
};

struct SynthResult {
  Corpus corpus;
  std::vector<LicensedOccurrence> gold;  // flattened, sentence order
  std::array<std::size_t, kContextCount> scheduled{};  // planned occurrence counts
};

// Deterministic corpus with gold trees and annotations. Per-context counts
// are realized exactly: round(freq * n / 100k) sentences per context placed
// at seeded positions, the rest neutral.
SynthResult generate_corpus(const GrammarSpec& spec, std::size_t n_sentences, std::uint64_t seed);

// Every sentence carries >= 2 candidate licensors at distinct tree
// distances; gold marks the tree-nearest one.
SynthResult multi_licensor_suite(const GrammarSpec& spec, std::size_t n_sentences,
                                 std::uint64_t seed);

// Exhaustively expands every frame and checks, with a naive window matcher
// independent of find_matches, that the lexicon matches in each expansion
// are exactly the intended slots. Guards gold exactness against stray
// lexicon words in frames or fillers.
void validate_against_lexicon(const GrammarSpec& spec, const Lexicon& lexicon);

}  // namespace polarity

#endif  // POLARITY_SYNTH_HPP
