#ifndef POLARITY_ABLATION_HPP
#define POLARITY_ABLATION_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "polarity/context_type.hpp"
#include "polarity/corpus.hpp"
#include "polarity/scope.hpp"

namespace polarity {

// Deterministic recipe for one single-context corpus: every sentence with an
// other-context occurrence is swapped for a neutral donor of equal length.
struct AblationPlan {
  ContextType keep = ContextType::SimpleQuestions;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::size_t, std::size_t>> replacements;  // (sentence_id, donor_id)

  struct Summary {
    std::size_t replaced = 0;
    std::size_t neutral_pool = 0;
    std::size_t kept_occurrences_lost = 0;  // kept-context occurrences inside replaced sentences
    std::size_t length_fallbacks = 0;       // donors chosen at +-2 tokens instead of exact length
  } summary;
};

// Donors are sampled uniformly (seeded, with replacement) from neutral
// sentences of the same length; if none exists, the nearest length within
// +-2 tokens is used (shorter preferred, then earlier sentence id).
// Throws PlanningError when no donor fits the window.
AblationPlan plan_ablation(const Corpus& corpus, const std::vector<LicensedOccurrence>& occurrences,
                           ContextType keep, std::uint64_t seed);

// Applies a plan: replaced positions hold donor copies, everything else is
// untouched, ids renumbered in place.
Corpus apply_ablation(const Corpus& corpus, const AblationPlan& plan);

void write_plan_json(const AblationPlan& plan, std::ostream& out);
AblationPlan read_plan_json(std::istream& in);

}  // namespace polarity

#endif  // POLARITY_ABLATION_HPP
