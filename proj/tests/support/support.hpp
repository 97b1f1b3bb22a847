// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>

#include "egogen/core/image.hpp"

namespace egogen::testing {

namespace fs = std::filesystem;

/// Repository root (set at configure time).
fs::path source_dir();
fs::path mock5_dir();

/// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

Image random_image(int width, int height, int channels, std::mt19937_64& rng);
Image constant_image(int width, int height, int channels, std::uint8_t value);
Mask random_mask(int width, int height, std::mt19937_64& rng, double density);

/// Relative path -> digest for every file under `root` except audit logs.
/// PNG files are digested by their decoded pixels, everything else by bytes.
using Snapshot = std::map<std::string, std::string>;
Snapshot snapshot_tree(const fs::path& root);
std::string format_snapshot(const Snapshot& snapshot);
Snapshot parse_snapshot(const std::string& text);

/// Runs curate, filter, score-curation, ground, generate (both targets),
/// evaluate (both targets) and finetune-prep (both targets) on the bundled
/// mock fixture. Artifacts go under `out`; the audit log goes to `audit`.
void run_mock5(const fs::path& out, const fs::path& audit, int workers = 1);

}  // namespace egogen::testing
