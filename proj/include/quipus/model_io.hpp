#pragma once

#include <filesystem>

#include <json.hpp>

#include "quipus/ensemble.hpp"

namespace quipus {

/// Version written into every model document; readers reject other versions.
inline constexpr int kModelFormatVersion = 1;

nlohmann::json model_to_json(const QuipusModel& model);
QuipusModel model_from_json(const nlohmann::json& doc);

void save_model(const QuipusModel& model, const std::filesystem::path& path);
QuipusModel load_model(const std::filesystem::path& path);

}  // namespace quipus
