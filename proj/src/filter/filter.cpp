// SPDX-License-Identifier: Apache-2.0
#include "egogen/filter/filter.hpp"

#include <algorithm>

#include "egogen/core/error.hpp"
#include "egogen/grounding/replies.hpp"

namespace egogen::filter {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Kept: return "kept";
    case Verdict::Rejected: return "rejected";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "rejected";
}

std::vector<std::string> identify_objects(const std::string& action, const Frame& frame,
                                          backends::VisionLanguageBackend& vlm,
                                          const grounding::PromptSet& prompts) {
  backends::ChatRequest request;
  request.action = action;
  request.messages.push_back({backends::ChatMessage::Role::User,
                              grounding::render(prompts.identify, {{"action", action}}), frame});
  return grounding::parse_object_list(vlm.chat(request));
}

std::vector<DetectionResult> detect(const Frame& frame, const std::vector<std::string>& labels,
                                    backends::DetectionBackend& detector, double threshold) {
  if (labels.empty()) throw Error(ErrorCode::PreconditionViolation, "detect needs at least one label");
  auto results = detector.detect_segment(frame, labels);
  std::erase_if(results, [threshold](const DetectionResult& d) { return d.score < threshold; });
  return results;
}

Rule apply_rule(const std::vector<DetectionResult>& initial, const std::vector<std::string>& objects,
                const std::vector<DetectionResult>& action, const FilterConfig& config) {
  auto is_hand = [](const DetectionResult& d) { return grounding::normalize_object_name(d.label) == kHandLabel; };
  auto is_object = [&](const DetectionResult& d) {
    const auto name = grounding::normalize_object_name(d.label);
    return name != kHandLabel && std::find(objects.begin(), objects.end(), name) != objects.end();
  };
  const bool hands_initial = std::any_of(initial.begin(), initial.end(), [&](const DetectionResult& d) {
    return is_hand(d) && d.score >= config.hand_threshold;
  });
  const bool objects_initial = std::any_of(initial.begin(), initial.end(), [&](const DetectionResult& d) {
    return is_object(d) && d.score >= config.threshold;
  });
  const bool hands_action = std::any_of(action.begin(), action.end(), [&](const DetectionResult& d) {
    return is_hand(d) && d.score >= config.hand_threshold;
  });

  Rule rule;
  if (!(hands_initial || objects_initial)) rule.reasons.emplace_back(kNoObjectsOrHandsInInitial);
  if (!hands_action) rule.reasons.emplace_back(kNoHandsInAction);
  rule.kept = rule.reasons.empty();
  return rule;
}

FilterDecision filter_triplet(const ingest::ActionTriplet& triplet, const Frame& initial, const Frame& action,
                              backends::VisionLanguageBackend& vlm, backends::DetectionBackend& detector,
                              const grounding::PromptSet& prompts, const FilterConfig& config) {
  FilterDecision decision;
  decision.triplet = triplet;
  try {
    decision.objects = identify_objects(triplet.annotation.action_text, initial, vlm, prompts);

    std::vector<std::string> labels = decision.objects;
    if (std::find(labels.begin(), labels.end(), kHandLabel) == labels.end()) labels.emplace_back(kHandLabel);
    const double floor = std::min(config.threshold, config.hand_threshold);
    auto in_initial = detect(initial, labels, detector, floor);
    auto in_action = detect(action, {kHandLabel}, detector, config.hand_threshold);
    for (auto& d : in_initial) d.frame_ref = FrameKind::Initial;
    for (auto& d : in_action) d.frame_ref = FrameKind::Action;

    const Rule rule = apply_rule(in_initial, decision.objects, in_action, config);
    decision.kept = rule.kept;
    decision.reasons = rule.reasons;
    decision.verdict = rule.kept ? Verdict::Kept : Verdict::Rejected;
    decision.detections = std::move(in_initial);
    decision.detections.insert(decision.detections.end(), in_action.begin(), in_action.end());
  } catch (const Error& e) {
    if (!is_backend_error(e.code())) throw;
    decision.verdict = Verdict::Indeterminate;
    decision.kept = false;
    decision.reasons = {kIndeterminate};
    decision.error = e.what();
    decision.detections.clear();
  }
  return decision;
}

nlohmann::json detection_to_json(const DetectionResult& d) {
  nlohmann::json j;
  j["label"] = d.label;
  j["score"] = d.score;
  j["bbox"] = {d.bbox.x_min, d.bbox.y_min, d.bbox.x_max, d.bbox.y_max};
  if (d.frame_ref) j["frame_ref"] = to_string(*d.frame_ref);
  if (d.clamped) j["clamped"] = true;
  return j;
}

DetectionResult detection_from_json(const nlohmann::json& j) {
  DetectionResult d;
  d.label = j.at("label").get<std::string>();
  d.score = j.at("score").get<double>();
  const auto box = j.at("bbox").get<std::vector<double>>();
  if (box.size() != 4) throw Error(ErrorCode::SchemaMismatch, "bbox needs 4 numbers");
  d.bbox = {box[0], box[1], box[2], box[3]};
  if (j.contains("frame_ref")) d.frame_ref = frame_kind_from_string(j.at("frame_ref").get<std::string>());
  d.clamped = j.value("clamped", false);
  return d;
}

nlohmann::json decision_fields(const FilterDecision& decision) {
  nlohmann::json j;
  j["kept"] = decision.kept;
  j["verdict"] = to_string(decision.verdict);
  j["reasons"] = decision.reasons;
  nlohmann::json dets = nlohmann::json::array();
  for (const auto& d : decision.detections) dets.push_back(detection_to_json(d));
  j["detections"] = std::move(dets);
  j["objects"] = decision.objects;
  if (!decision.error.empty()) j["error"] = decision.error;
  return j;
}

}  // namespace egogen::filter
