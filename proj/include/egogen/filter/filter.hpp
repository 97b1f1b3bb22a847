// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egogen/backends/backend.hpp"
#include "egogen/grounding/prompts.hpp"
#include "egogen/ingest/annotation.hpp"

namespace egogen::filter {

using backends::DetectionResult;

inline constexpr double kDefaultDetectionThreshold = 0.3;
inline constexpr const char* kHandLabel = "hand";

inline constexpr const char* kNoObjectsOrHandsInInitial = "NO_OBJECTS_OR_HANDS_IN_INITIAL";
inline constexpr const char* kNoHandsInAction = "NO_HANDS_IN_ACTION";
inline constexpr const char* kIndeterminate = "INDETERMINATE";

struct FilterConfig {
  double threshold = kDefaultDetectionThreshold;       ///< objects
  double hand_threshold = kDefaultDetectionThreshold;  ///< hands
};

enum class Verdict { Kept, Rejected, Indeterminate };

struct FilterDecision {
  ingest::ActionTriplet triplet;
  Verdict verdict = Verdict::Rejected;
  bool kept = false;
  std::vector<std::string> reasons;
  std::vector<DetectionResult> detections;
  std::vector<std::string> objects;  ///< identified relevant objects
  std::string error;                 ///< backend failure text when indeterminate
};

/// Step 1: relevant visible objects named by the VLM for (action, initial frame).
/// Lowercase, deduplicated; may be empty. MalformedBackendReply on prose.
std::vector<std::string> identify_objects(const std::string& action, const Frame& frame,
                                          backends::VisionLanguageBackend& vlm,
                                          const grounding::PromptSet& prompts);

/// Steps 2-3: queries the detector and drops detections scoring below threshold.
/// PreconditionViolation for an empty label list.
std::vector<DetectionResult> detect(const Frame& frame, const std::vector<std::string>& labels,
                                    backends::DetectionBackend& detector,
                                    double threshold = kDefaultDetectionThreshold);

struct Rule {
  bool kept = false;
  std::vector<std::string> reasons;
};

/// Step 4 on raw detections: keep iff the initial frame shows hands or any
/// identified object, and the action frame shows hands. Scores are compared
/// with the configured thresholds here, so unfiltered detections are fine.
Rule apply_rule(const std::vector<DetectionResult>& initial, const std::vector<std::string>& objects,
                const std::vector<DetectionResult>& action, const FilterConfig& config);

/// Runs identify, detect and the rule for one triplet. Only the initial and
/// action frames are inspected. Backend failures produce an Indeterminate
/// decision rather than a rejection.
FilterDecision filter_triplet(const ingest::ActionTriplet& triplet, const Frame& initial, const Frame& action,
                              backends::VisionLanguageBackend& vlm, backends::DetectionBackend& detector,
                              const grounding::PromptSet& prompts, const FilterConfig& config = {});

std::string_view to_string(Verdict verdict);

nlohmann::json detection_to_json(const DetectionResult& d);
DetectionResult detection_from_json(const nlohmann::json& j);

/// Manifest fields added by the filter stage: kept, verdict, reasons, detections, objects.
nlohmann::json decision_fields(const FilterDecision& decision);

}  // namespace egogen::filter
