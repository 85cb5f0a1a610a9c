#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "walip/types.hpp"

namespace walip {

/// Reads a JSON object whose keys mirror PipelineConfig fields. Keys absent
/// from the document keep their value from `base`. Unknown keys, wrong types
/// and out-of-domain values raise ConfigError.
PipelineConfig config_from_json(std::string_view json, const PipelineConfig& base = {});
PipelineConfig load_config(const std::filesystem::path& path, const PipelineConfig& base = {});
std::string config_to_json(const PipelineConfig& cfg);

std::string_view to_string(QuantileSchedule mode) noexcept;
std::string_view to_string(ProcrustesKind kind) noexcept;
QuantileSchedule parse_quantile_schedule(std::string_view text);
ProcrustesKind parse_procrustes_kind(std::string_view text);

}  // namespace walip
