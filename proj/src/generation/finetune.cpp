// SPDX-License-Identifier: Apache-2.0
#include "egogen/generation/finetune.hpp"

#include <cmath>

#include "egogen/core/error.hpp"

namespace egogen::generation {

FinetuneSpec finetune_prepare(const ingest::DatasetSplit& split, const std::map<std::string, PlanRef>& plans,
                              Target target, const std::string& dataset, int epochs,
                              std::optional<double> aux_loss_weight) {
  if (epochs <= 0) throw Error(ErrorCode::ConfigInvalid, "epochs must be positive");
  if (split.train.empty()) throw Error(ErrorCode::EmptyInput, "split has no training triplets");
  FinetuneSpec spec;
  spec.target = target;
  spec.dataset = dataset;
  spec.epochs = epochs;
  spec.aux_loss_weight = aux_loss_weight;
  for (const auto& t : split.train) {
    auto it = plans.find(t.key);
    if (it == plans.end()) throw Error(ErrorCode::MissingPlan, "no mask plan for triplet " + t.key);
    const PlanRef& ref = it->second;
    spec.pairs.push_back({t.key, ref.input, target == Target::Action ? ref.action_mask : ref.final_mask,
                          t.annotation.action_text,
                          target == Target::Action ? t.frame_paths.action : t.frame_paths.final});
  }
  return spec;
}

nlohmann::json to_json(const FinetuneSpec& spec) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : spec.pairs) {
    pairs.push_back({{"key", p.key}, {"input", p.input}, {"mask", p.mask}, {"prompt", p.prompt}, {"target", p.target}});
  }
  nlohmann::json weight = nullptr;
  if (spec.aux_loss_weight) weight = *spec.aux_loss_weight;
  return {{"target", to_string(spec.target)},
          {"dataset", spec.dataset},
          {"epochs", spec.epochs},
          {"loss",
           {{"primary", "backend denoising objective"},
            {"auxiliary", {{"kind", "neg_log_cosine"}, {"weight", weight}, {"penalty", kLossPenalty}}}}},
          {"n_pairs", spec.pairs.size()},
          {"pairs", pairs}};
}

FinetuneSpec finetune_from_json(const nlohmann::json& j) {
  try {
    FinetuneSpec spec;
    spec.target = target_from_string(j.at("target").get<std::string>());
    spec.dataset = j.at("dataset").get<std::string>();
    spec.epochs = j.at("epochs").get<int>();
    const auto& w = j.at("loss").at("auxiliary").at("weight");
    if (!w.is_null()) spec.aux_loss_weight = w.get<double>();
    for (const auto& p : j.at("pairs")) {
      spec.pairs.push_back({p.at("key"), p.at("input"), p.at("mask"), p.at("prompt"), p.at("target")});
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, std::string("training job: ") + e.what());
  }
}

LossValue similarity_loss(double cosine, double penalty) {
  if (!(cosine > 0)) return {penalty, cosine, true};
  if (cosine >= 1) return {0.0, cosine, false};
  return {-std::log(cosine), cosine, false};
}

LossValue training_loss(const Image& frame_in, const Image& generated, backends::EmbeddingBackend& embedder,
                        double penalty) {
  return similarity_loss(backends::cosine(embedder.embed(Frame{"input", frame_in}), embedder.embed(Frame{"generated", generated})), penalty);
}

}  // namespace egogen::generation
