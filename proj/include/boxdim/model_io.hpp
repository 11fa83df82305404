#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "boxdim/levy_model.hpp"

namespace boxdim {

/// Parses `{ "family": "stable", "alpha": 0.5, "drift": 0.0 }` and friends.
/// Families: stable, gamma, truncated_stable, custom (named built-in tail), drift.
/// Unknown keys are rejected.
LevyModel model_from_json(const nlohmann::json& j);
LevyModel load_model_file(const std::filesystem::path& path);
nlohmann::json model_to_json(const LevyModel& model);

}  // namespace boxdim
