#pragma once

#include "cashcast/models/forecast_model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace cashcast {

/// Version of the text format written by serialize_model.
inline constexpr int kModelFormatVersion = 1;

/// Nested key-value JSON document:
///   { "format": "cashcast-model", "version": 1, "family": "...",
///     "training_summary": {...}, "params": {...} }
/// Doubles are written in shortest round-trip form, so a reload predicts bit-identically.
std::string serialize_model(const ForecastModel& model);
/// Throws ValidationError on malformed documents or unknown versions.
ForecastModel deserialize_model(std::string_view text);

void save_model(const ForecastModel& model, const std::filesystem::path& path);
ForecastModel load_model(const std::filesystem::path& path);

}  // namespace cashcast
