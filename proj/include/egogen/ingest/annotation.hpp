// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace egogen::ingest {

enum class DatasetTag { Ego4D, EGTEA, EK100, Custom };
enum class SelectionStrategy { PaperDefault, LegoStyle, AnnotatedKeyframes };

std::string_view to_string(DatasetTag tag);
DatasetTag dataset_tag_from_string(std::string_view text);
/// "paper" | "lego" | "keyframes"
std::string_view to_string(SelectionStrategy strategy);
SelectionStrategy strategy_from_string(std::string_view text);

/// Dataset-provided critical frames in seconds (Ego4D PRE / PNR / POST).
struct Keyframes {
  double pre = 0;
  double pnr = 0;
  double post = 0;
};

struct ActionAnnotation {
  std::string video_id;
  std::string action_text;
  double t_start = 0;  ///< seconds
  double t_end = 0;    ///< seconds
  DatasetTag dataset = DatasetTag::Custom;
  std::optional<Keyframes> keyframes;
  /// Dataset-specific fields that have no place in the common schema.
  std::map<std::string, std::string> metadata;

  /// NegativeDuration if t_end <= t_start; SchemaMismatch for empty text or negative start.
  void validate() const;
};

struct Timestamps {
  double initial = 0;
  double action = 0;
  double final = 0;
  /// The strategy has no rule for the final frame; `final` is the default rule's value.
  bool final_flagged = false;
};

struct FramePaths {
  std::string initial;
  std::string action;
  std::string final;

  const std::string& get(std::size_t kind_index) const;
  bool complete() const { return !initial.empty() && !action.empty() && !final.empty(); }
};

struct ActionTriplet {
  std::string key;  ///< unique within a manifest; used for artifact file names
  ActionAnnotation annotation;
  double t_initial = 0;
  double t_action = 0;
  double t_final = 0;
  FramePaths frame_paths;
  SelectionStrategy strategy = SelectionStrategy::PaperDefault;
  /// Timestamps of the decoded frames actually written, once extracted.
  std::optional<std::array<double, 3>> frame_times;
  std::vector<std::string> flags;

  /// Ordering always; the [t_start - 0.25, t_end] window for formula strategies.
  void validate() const;
};

/// Lower bound of the window a triplet's timestamps may occupy, before t_start.
inline constexpr double kLeadIn = 0.25;

}  // namespace egogen::ingest
