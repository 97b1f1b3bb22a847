// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egogen/ingest/annotation.hpp"

namespace egogen::ingest {

/// One manifest line: the triplet plus any fields later stages attached
/// (kept, reasons, detections, ...), preserved verbatim.
struct ManifestEntry {
  ActionTriplet triplet;
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json to_json(const ActionTriplet& triplet);
ActionTriplet triplet_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ManifestEntry& entry);
ManifestEntry entry_from_json(const nlohmann::json& j);

/// MissingInput if the file is absent; SchemaMismatch naming the line on bad records.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

/// Resolves a manifest-relative frame path.
std::filesystem::path resolve_frame_path(const std::filesystem::path& manifest_path, const std::string& frame_path);

}  // namespace egogen::ingest
