// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egogen/backends/backend.hpp"
#include "egogen/generation/generate.hpp"
#include "egogen/ingest/split.hpp"

namespace egogen::generation {

/// Stored artefacts for one triplet, as paths relative to the job output.
struct PlanRef {
  std::string input;       ///< relocated frame when present, else f_in
  std::string action_mask; ///< stage1 | stage2
  std::string final_mask;  ///< final stage raster
};

struct TrainingPair {
  std::string key;
  std::string input;
  std::string mask;
  std::string prompt;
  std::string target;  ///< ground-truth f_action or f_final
};

struct FinetuneSpec {
  Target target = Target::Action;
  std::string dataset;
  int epochs = 5;
  /// Weight of the embedding-similarity term; unset means "not chosen".
  std::optional<double> aux_loss_weight;
  std::vector<TrainingPair> pairs;
};

/// Build a training job from the train side of a split. Every train triplet
/// needs a stored plan; a missing one raises MissingPlan naming the key.
FinetuneSpec finetune_prepare(const ingest::DatasetSplit& split, const std::map<std::string, PlanRef>& plans,
                              Target target, const std::string& dataset, int epochs = 5,
                              std::optional<double> aux_loss_weight = std::nullopt);

nlohmann::json to_json(const FinetuneSpec& spec);
FinetuneSpec finetune_from_json(const nlohmann::json& j);

constexpr double kLossPenalty = 1e3;

struct LossValue {
  double value = 0;
  double cosine = 0;
  bool penalized = false;
};

/// -log(cos) between embeddings of the source frame and a generated frame.
/// Non-positive similarity yields the fixed penalty instead of a NaN.
LossValue similarity_loss(double cosine, double penalty = kLossPenalty);
LossValue training_loss(const Image& frame_in, const Image& generated, backends::EmbeddingBackend& embedder,
                        double penalty = kLossPenalty);

}  // namespace egogen::generation
