#ifndef POLARITY_EXPERIMENT_HPP
#define POLARITY_EXPERIMENT_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "polarity/run_config.hpp"

namespace polarity {

// Runs the full synthetic pipeline: corpus generation, scan, per-seed
// all-context training (experiment 1) and per-context single-context
// training (experiment 2), followed by the dynamics analysis. Writes
// corpora, occurrence files, checkpoints, curve CSVs, SVG figures and
// report.json under out_dir; returns the report. Completed training runs
// (marked by a manifest) are reused, which makes interrupted invocations
// resumable with identical results.
nlohmann::json run_experiment(const RunConfig& cfg, const std::string& out_dir);

}  // namespace polarity

#endif  // POLARITY_EXPERIMENT_HPP
