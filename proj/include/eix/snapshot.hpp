#pragma once

#include <filesystem>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "eix/engine.hpp"

namespace eix {

inline constexpr int kSnapshotVersion = 1;

struct SnapshotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Schema v1: {version, config, h, granules[]}. Granules carry id, the five
// vectors, support and the label tally (keys as strings). Logs and run
// stats are deliberately not persisted; a restored model predicts and
// processes exactly like the saved one but starts fresh logs.
nlohmann::json to_snapshot_json(const ModelState& s, const EngineConfig& cfg);

// Throws SnapshotError on version mismatch, missing or mistyped fields,
// inconsistent vector lengths, or invalid config values. next_id resumes at
// max granule id + 1.
std::pair<ModelState, EngineConfig> from_snapshot_json(
    const nlohmann::json& j);

// File variants. Saving writes atomically (temp file, then rename), so a
// failed save never leaves a truncated snapshot behind. Loading wraps parse
// and IO failures in SnapshotError.
void save_snapshot(const std::filesystem::path& file, const ModelState& s,
                   const EngineConfig& cfg);
std::pair<ModelState, EngineConfig> load_snapshot(
    const std::filesystem::path& file);

}  // namespace eix
