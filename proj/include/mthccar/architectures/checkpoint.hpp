#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "mthccar/architectures/model.hpp"
#include "mthccar/gradcore/optimizer.hpp"

namespace mthccar {

inline constexpr int kCheckpointFormatVersion = 1;

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {});

/// Single JSON document holding architecture, training config, scaler and
/// every parameter as a flat row-major array. Doubles round-trip exactly.
nlohmann::json checkpoint_json(const Model& model, const TrainConfig& config);
void save_checkpoint(const Model& model, const TrainConfig& config, const std::filesystem::path& path);

struct Checkpoint {
  Model model;
  TrainConfig config;
};

/// Throws ParseError on malformed documents or shape mismatches.
Checkpoint checkpoint_from_json(const nlohmann::json& j);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace mthccar
