#ifndef POLARITY_CURVES_HPP
#define POLARITY_CURVES_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "polarity/context_type.hpp"
#include "polarity/corpus.hpp"
#include "polarity/scope.hpp"

namespace polarity {

struct CurvePoint {
  std::size_t step = 0;
  double tokens_seen = 0.0;
  double examples_seen = 0.0;  // cumulative context occurrences in the training stream
  double accuracy = 0.0;
};

// Per-checkpoint accuracy series for one licensing context.
struct LearningCurve {
  ContextType context = ContextType::SimpleQuestions;
  std::string seed_tag;  // "s<seed>" or "mean"
  std::vector<CurvePoint> points;
};

// CSV: context,seed,step,tokens_seen,context_examples_seen,accuracy
void write_curves_csv(const std::vector<LearningCurve>& curves, std::ostream& out);
std::vector<LearningCurve> read_curves_csv(std::istream& in);

// Pointwise mean over curves sharing (context, step grid); mean curves get
// seed_tag "mean". Throws ArgumentError on mismatched grids.
std::vector<LearningCurve> mean_curves_by_context(const std::vector<LearningCurve>& curves);

// Counts how many licensed occurrences the training loop has consumed by a
// given checkpoint. The corpus is laid out in contiguous batch lanes; an
// occurrence counts as seen once its NPI token has been predicted. Matches
// the lane layout of train_lm for the same batch size.
class ExampleSchedule {
 public:
  ExampleSchedule(const Corpus& corpus, const std::vector<LicensedOccurrence>& occurrences,
                  std::size_t batch_size);

  std::array<double, kContextCount> seen_at(std::size_t epoch, std::size_t pos_in_epoch) const;
  std::size_t total(ContextType c) const { return totals_[context_index(c)]; }

 private:
  std::array<std::vector<std::size_t>, kContextCount> lane_positions_;  // sorted, per context
  std::array<std::size_t, kContextCount> totals_{};
};

}  // namespace polarity

#endif  // POLARITY_CURVES_HPP
