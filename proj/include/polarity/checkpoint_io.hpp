#ifndef POLARITY_CHECKPOINT_IO_HPP
#define POLARITY_CHECKPOINT_IO_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "polarity/lm.hpp"

namespace polarity {

// config <-> JSON echo used by checkpoints and run manifests
nlohmann::json config_to_json(const LMConfig& config);
LMConfig config_from_json(const nlohmann::json& j);

// Versioned binary checkpoint container: magic, JSON header (config echo,
// vocab, named parameter shapes, step metadata), then raw little-endian
// float32 arrays in header order. A JSON sidecar `<file>.json` carries the
// step metadata for tools that do not want to open the binary.
void save_checkpoint(const CheckpointedModel& model, const std::string& path);
CheckpointedModel load_checkpoint(const std::string& path);

}  // namespace polarity

#endif  // POLARITY_CHECKPOINT_IO_HPP
