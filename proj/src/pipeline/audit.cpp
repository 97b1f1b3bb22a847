// SPDX-License-Identifier: Apache-2.0
#include "egogen/pipeline/audit.hpp"

#include <fstream>

#include "egogen/core/error.hpp"

namespace egogen::pipeline {

AuditLog::AuditLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
}

void AuditLog::record(const std::string& stage, const std::string& key, const std::string& status, double wall_time,
                      const nlohmann::json& detail) {
  const nlohmann::json line{{"stage", stage}, {"key", key}, {"status", status}, {"wall_time", wall_time}, {"detail", detail}};
  std::lock_guard lock(mutex_);
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(ErrorCode::MissingInput, "cannot append to audit log " + path_.string());
  out << line.dump() << '\n';
}

}  // namespace egogen::pipeline
