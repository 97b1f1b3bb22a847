// SPDX-License-Identifier: Apache-2.0
#include "egogen/ingest/annotation.hpp"

#include <cctype>
#include <cmath>

#include "egogen/core/error.hpp"

namespace egogen::ingest {

std::string_view to_string(DatasetTag tag) {
  switch (tag) {
    case DatasetTag::Ego4D: return "Ego4D";
    case DatasetTag::EGTEA: return "EGTEA";
    case DatasetTag::EK100: return "EK100";
    case DatasetTag::Custom: return "Custom";
  }
  return "Custom";
}

DatasetTag dataset_tag_from_string(std::string_view text) {
  std::string lower;
  for (char c : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "ego4d") return DatasetTag::Ego4D;
  if (lower == "egtea" || lower == "egtea+" || lower == "egtea_gaze+") return DatasetTag::EGTEA;
  if (lower == "ek100" || lower == "epic-kitchens-100" || lower == "ek-100") return DatasetTag::EK100;
  if (lower == "custom") return DatasetTag::Custom;
  throw Error(ErrorCode::ConfigInvalid, "unknown dataset tag '" + std::string(text) + "'");
}

std::string_view to_string(SelectionStrategy strategy) {
  switch (strategy) {
    case SelectionStrategy::PaperDefault: return "paper";
    case SelectionStrategy::LegoStyle: return "lego";
    case SelectionStrategy::AnnotatedKeyframes: return "keyframes";
  }
  return "paper";
}

SelectionStrategy strategy_from_string(std::string_view text) {
  if (text == "paper") return SelectionStrategy::PaperDefault;
  if (text == "lego") return SelectionStrategy::LegoStyle;
  if (text == "keyframes") return SelectionStrategy::AnnotatedKeyframes;
  throw Error(ErrorCode::ConfigInvalid, "unknown selection strategy '" + std::string(text) + "'");
}

void ActionAnnotation::validate() const {
  if (!std::isfinite(t_start) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::SchemaMismatch, "non-finite action times");
  }
  if (t_end <= t_start) {
    throw Error(ErrorCode::NegativeDuration, "action '" + action_text + "' ends at " + std::to_string(t_end) +
                                                 " before it starts at " + std::to_string(t_start));
  }
  if (t_start < 0) throw Error(ErrorCode::SchemaMismatch, "action starts before the video");
  if (action_text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::SchemaMismatch, "empty action text");
  }
}

const std::string& FramePaths::get(std::size_t kind_index) const {
  switch (kind_index) {
    case 0: return initial;
    case 1: return action;
    default: return final;
  }
}

void ActionTriplet::validate() const {
  annotation.validate();
  if (!(t_initial <= t_action && t_action <= t_final)) {
    throw Error(ErrorCode::SchemaMismatch, "triplet '" + key + "' timestamps are not ordered");
  }
  if (strategy != SelectionStrategy::AnnotatedKeyframes) {
    const double lo = annotation.t_start - kLeadIn - 1e-9;
    const double hi = annotation.t_end + 1e-9;
    if (t_initial < lo || t_final > hi) {
      throw Error(ErrorCode::SchemaMismatch, "triplet '" + key + "' timestamps leave the action window");
    }
  }
}

}  // namespace egogen::ingest
