// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "egogen/core/error.hpp"
#include "egogen/pipeline/config.hpp"

namespace egogen::pipeline {

namespace fs = std::filesystem;

/// What a stage did. Per-triplet failures do not stop the stage; the first
/// one is kept here and decides the exit status.
struct StageSummary {
  std::string stage;
  std::size_t processed = 0;
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  std::optional<ErrorCode> first_error;
  std::string first_message;
  std::vector<fs::path> outputs;
  std::vector<std::string> notes;  ///< human-readable lines for stderr

  int exit_code() const { return first_error ? exit_code_for(*first_error) : 0; }
};

struct CurateArgs {
  std::string dataset;  ///< ego4d | egtea | ek100 | custom
  fs::path annotations;
  fs::path videos;
  std::string strategy;  ///< overrides the config; empty keeps it
  fs::path out;          ///< manifest path; frames go to <out dir>/frames/
};

struct FilterArgs {
  fs::path manifest;
  fs::path out;
  std::optional<double> threshold;
};

struct ScoreCurationArgs {
  fs::path automatic;
  fs::path manual;
  fs::path out;  ///< empty: no file, summary only
};

struct GroundArgs {
  fs::path manifest;
  fs::path out;  ///< one sub-directory per triplet key
  fs::path prompts;
};

struct GenerateArgs {
  fs::path manifest;
  fs::path masks;
  std::string target = "action";  ///< action | final | both
  std::optional<std::uint64_t> seed;
  fs::path out;
};

struct EvaluateArgs {
  fs::path generated;
  fs::path gt;  ///< manifest
  fs::path masks;
  std::string target = "action";
  fs::path out;    ///< report JSON
  fs::path table;  ///< optional text table
  /// Score f_in itself as the generated frame (input-copy baseline).
  bool copy_input_baseline = false;
};

struct FinetunePrepArgs {
  fs::path manifest;
  fs::path masks;
  std::string target = "action";
  fs::path out;            ///< job JSON
  fs::path test_manifest;  ///< optional: held-out triplets
};

StageSummary run_curate(const PipelineConfig& config, const CurateArgs& args);
StageSummary run_filter(const PipelineConfig& config, const FilterArgs& args);
StageSummary run_score_curation(const PipelineConfig& config, const ScoreCurationArgs& args);
StageSummary run_ground(const PipelineConfig& config, const GroundArgs& args);
StageSummary run_generate(const PipelineConfig& config, const GenerateArgs& args);
StageSummary run_evaluate(const PipelineConfig& config, const EvaluateArgs& args);
StageSummary run_finetune_prep(const PipelineConfig& config, const FinetunePrepArgs& args);

/// Stable triplet key: sanitized video id plus the record's position.
std::string triplet_key(const std::string& video_id, std::size_t index);

}  // namespace egogen::pipeline
