// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "egogen/backends/backend.hpp"

namespace egogen::pipeline {

struct PipelineFlags {
  bool auto_append_hands = true;
  bool mclip_crop = true;  ///< false: zero pixels outside the mask instead
  bool full_frame_fallback = true;
};

struct PipelineConfig {
  double detection_threshold = 0.3;
  std::optional<double> hand_threshold;  ///< defaults to detection_threshold
  double similarity_threshold = 80.0;    ///< x100
  std::string selection_strategy;        ///< empty: keyframes for Ego4D, paper otherwise
  std::uint64_t seed = 0;
  double split_ratio = 0.8;
  std::uint64_t split_seed = 0;
  int epochs = 5;
  std::optional<double> aux_loss_weight;
  int workers = 1;
  std::string method = "egogen";
  std::string prompts_dir;  ///< empty: built-in templates
  std::string audit_log;    ///< empty: audit.jsonl next to each stage's output
  PipelineFlags flags;
  std::array<backends::BackendDescriptor, 4> backends{};  ///< indexed by BackendKind

  PipelineConfig();

  backends::BackendDescriptor& backend(backends::BackendKind kind);
  const backends::BackendDescriptor& backend(backends::BackendKind kind) const;
  double effective_hand_threshold() const { return hand_threshold.value_or(detection_threshold); }

  /// ConfigInvalid for any out-of-range value.
  void validate() const;
};

/// Reads a JSON config file. Relative fixture and prompt paths resolve
/// against the file's directory. Unknown keys raise ConfigInvalid.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
nlohmann::json to_json(const PipelineConfig& config);

/// EGOGEN_<KIND>_ENDPOINT, EGOGEN_<KIND>_TIMEOUT and EGOGEN_TIMEOUT, with KIND
/// one of VLM, DETECTOR, INPAINTER, EMBEDDER. `getenv` is injectable for tests.
using EnvLookup = std::optional<std::string> (*)(const char*);
void apply_env_overrides(PipelineConfig& config, EnvLookup getenv_fn = nullptr);

/// "mock" forces every endpoint to the in-process mocks; "remote" requires
/// every endpoint to be an http(s) URL.
void apply_backend_mode(PipelineConfig& config, const std::string& mode);

}  // namespace egogen::pipeline
