// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

namespace egogen::pipeline {

/// Append-only JSONL log: {"stage", "key", "status", "wall_time", "detail"}.
/// Each stage writes exactly one terminal record per triplet.
class AuditLog {
 public:
  explicit AuditLog(std::filesystem::path path);

  void record(const std::string& stage, const std::string& key, const std::string& status, double wall_time,
              const nlohmann::json& detail = nlohmann::json::object());

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
};

}  // namespace egogen::pipeline
