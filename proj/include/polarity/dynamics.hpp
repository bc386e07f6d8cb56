#ifndef POLARITY_DYNAMICS_HPP
#define POLARITY_DYNAMICS_HPP

#include <optional>
#include <vector>

#include "polarity/curves.hpp"
#include "polarity/stats.hpp"

namespace polarity {

struct SmoothingConfig {
  std::size_t window = 25;  // odd
  std::size_t degree = 1;

  void validate() const;  // throws ConfigError
};

// Savitzky-Golay smoothing on a uniform step grid. Near the edges the window
// is truncated symmetrically to the largest available odd width, and the fit
// degree drops to (window points - 1) when the truncated window is smaller
// than degree + 1. x-fields are untouched.
LearningCurve savgol_smooth(const LearningCurve& curve, const SmoothingConfig& cfg);

// Smoothed accuracy at the last checkpoint ("trained-out performance").
double final_accuracy(const LearningCurve& smoothed);

struct DataEfficiencyResult {
  ContextType context = ContextType::SimpleQuestions;
  double final_accuracy = 0.0;
  double threshold_accuracy = 0.0;  // 0.95 * final
  double examples_to_95 = 0.0;
  std::size_t step_to_95 = 0;
  std::size_t index_to_95 = 0;  // point index within the curve
};

// First point whose smoothed accuracy reaches 95% of the final accuracy.
DataEfficiencyResult data_efficiency(const LearningCurve& smoothed, double threshold_factor = 0.95);

struct AbcResult {
  ContextType context = ContextType::SimpleQuestions;
  double abc = 0.0;             // signed, accuracy x examples units
  double normalized_abc = 0.0;  // abc / x extent (mean vertical gap)
  std::size_t endpoint_step = 0;
  double endpoint_examples = 0.0;
};

// Signed area between the all-context and single-context curves up to the
// later of the two 95%-convergence points; positive when the all-context
// curve dominates. Integrates (all - single) against the all curve's
// context_examples_seen by the trapezoid rule. Curves must share a step
// grid (points with matching steps are intersected first).
AbcResult abc(const LearningCurve& all_curve, const LearningCurve& single_curve);

// Experiment 1 aggregation: per-context mean examples_to_95 across seeds,
// paired with corpus frequency, plus the Pearson correlation over contexts.
struct EfficiencyScatterPoint {
  ContextType context = ContextType::SimpleQuestions;
  double frequency_per_100k = 0.0;
  double mean_examples_to_95 = 0.0;
  std::vector<double> per_seed_examples;
};

struct FrequencyEfficiencyReport {
  std::vector<EfficiencyScatterPoint> points;
  StatResult correlation;
};

FrequencyEfficiencyReport frequency_vs_efficiency(
    const std::vector<std::pair<ContextType, double>>& frequency_per_100k,
    const std::vector<std::vector<DataEfficiencyResult>>& per_seed_results);

}  // namespace polarity

#endif  // POLARITY_DYNAMICS_HPP
