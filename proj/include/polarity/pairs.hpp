#ifndef POLARITY_PAIRS_HPP
#define POLARITY_PAIRS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "polarity/context_type.hpp"
#include "polarity/curves.hpp"
#include "polarity/lm.hpp"

namespace polarity {

// One Cloze item: the same sentence prefix with the licensor swapped for a
// matched non-licensor, and the NPI phrase whose probability is compared.
struct MinimalPair {
  std::size_t id = 0;
  ContextType context = ContextType::SimpleQuestions;
  std::vector<std::string> good_prefix;
  std::vector<std::string> bad_prefix;
  std::vector<std::string> npi;

  bool operator==(const MinimalPair&) const = default;
};

struct PairTemplate {
  ContextType context = ContextType::SimpleQuestions;

  struct PatternTok {
    std::string text;  // literal token or slot name
    bool is_slot = false;
  };
  std::vector<PatternTok> pattern;

  // licensor alternates: (licensing tokens, matched non-licensing tokens)
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> licensor_pairs;
  std::vector<std::vector<std::string>> npi_fillers;
  std::map<std::string, std::vector<std::vector<std::string>>> slot_fillers;

  std::size_t expansion_count() const;
  void validate() const;  // throws FormatError
};

// Template file: blocks of
//   template <context>
//   pattern  <tokens, {licensor} before {npi}>
//   licensor <good tokens> | <bad tokens>
//   npi      <tokens>
//   slot <name> <tokens>
//   end
// '#' starts a comment. Repeated licensor/npi/slot lines add alternates.
std::vector<PairTemplate> load_templates(std::istream& in);
std::vector<PairTemplate> load_templates_file(const std::string& path);

// Seeded sampling of distinct pairs, n per context (or every distinct
// expansion if the space is smaller, with a warning on stderr).
std::vector<MinimalPair> generate_pairs(const std::vector<PairTemplate>& templates,
                                        std::size_t n_per_context, std::uint64_t seed);

struct ContextAccuracy {
  ContextType context = ContextType::SimpleQuestions;
  std::size_t correct = 0;
  std::size_t total = 0;

  double accuracy() const { return static_cast<double>(correct) / static_cast<double>(total); }
};

// True iff the licensed prefix gives the NPI a strictly higher log
// probability; ties count as incorrect.
bool score_pair(const PhraseScorer& model, const MinimalPair& pair);

std::vector<ContextAccuracy> evaluate(const PhraseScorer& model,
                                      const std::vector<MinimalPair>& pairs);

// Per-checkpoint x-axis info, supplied by the caller (ExampleSchedule).
struct CheckpointAxis {
  std::size_t step = 0;
  double tokens_seen = 0.0;
  std::array<double, kContextCount> examples_seen{};
};

// One evaluation row per (checkpoint, context).
struct EvalRow {
  std::size_t step = 0;
  double tokens_seen = 0.0;
  double examples_seen = 0.0;
  ContextType context = ContextType::SimpleQuestions;
  std::size_t correct = 0;
  std::size_t total = 0;
};

// Scores every pair at every checkpoint. Checkpoints must be in strictly
// increasing step order and axes must line up one-to-one.
std::vector<EvalRow> evaluate_checkpoint_rows(std::span<const CheckpointedModel> checkpoints,
                                              const std::vector<MinimalPair>& pairs,
                                              std::span<const CheckpointAxis> axes);

// One curve per context present in `pairs` (the spec's evaluate_checkpoints).
std::vector<LearningCurve> evaluate_checkpoints(std::span<const CheckpointedModel> checkpoints,
                                                const std::vector<MinimalPair>& pairs,
                                                std::span<const CheckpointAxis> axes);

std::vector<LearningCurve> curves_from_rows(const std::vector<EvalRow>& rows,
                                            const std::string& seed_tag);

// pairs file: JSON-lines (id, context, good_prefix, bad_prefix, npi)
void write_pairs_jsonl(const std::vector<MinimalPair>& pairs, std::ostream& out);
std::vector<MinimalPair> read_pairs_jsonl(std::istream& in);

// results CSV: checkpoint_step,tokens_seen,context_examples_seen,context,correct,total,accuracy
void write_results_csv(const std::vector<EvalRow>& rows, std::ostream& out);
std::vector<EvalRow> read_results_csv(std::istream& in);

}  // namespace polarity

#endif  // POLARITY_PAIRS_HPP
