// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "egogen/backends/backend.hpp"
#include "egogen/grounding/prompts.hpp"

namespace egogen::grounding {

enum class Category { Core, Location, Functional };

std::string_view to_string(Category category);
Category category_from_string(std::string_view text);

/// Action-relevant objects sorted by role. Categories are pairwise disjoint.
struct RelevantObjectSet {
  std::string action;
  std::vector<std::string> core;
  std::vector<std::string> location;
  std::vector<std::string> functional;

  bool empty() const { return core.empty() && location.empty() && functional.empty(); }
  std::vector<std::string> all_names() const;
  std::optional<Category> category_of(const std::string& name) const;

  friend bool operator==(const RelevantObjectSet&, const RelevantObjectSet&) = default;
};

struct CategorizeOptions {
  /// Add "hand" to functional when no category names it.
  bool auto_append_hands = true;
};

struct CategorizeOutcome {
  RelevantObjectSet objects;
  /// The exchange so far, so a follow-up question continues the same conversation.
  std::vector<backends::ChatMessage> conversation;
  std::vector<std::string> warnings;
};

/// Two-turn protocol: (1) which visible objects are relevant to the action,
/// (2) sort exactly those objects into core / location / functional. Objects
/// the second reply leaves unassigned become functional with a warning; names
/// it invents are ignored with a warning. EmptyRelevantSet when nothing is left.
CategorizeOutcome categorize_objects(const std::string& action, const Frame& frame,
                                     backends::VisionLanguageBackend& vlm, const PromptSet& prompts,
                                     const CategorizeOptions& options = {});

struct RefineOutcome {
  RelevantObjectSet objects;
  /// Fell back to the best detection score (or list order) instead of the VLM's answer.
  bool flagged = false;
  std::string note;
};

/// Keeps only the most specific location object by asking the VLM (as the
/// next turn of `conversation` when given). No-op for a singleton. On backend
/// failure or an answer naming none of the candidates, keeps the candidate with
/// the highest entry in `location_scores` (first listed when none is scored)
/// and flags the outcome. PreconditionViolation when there is no location.
RefineOutcome refine_location(const RelevantObjectSet& objects, const Frame& frame,
                              backends::VisionLanguageBackend& vlm, const PromptSet& prompts,
                              const std::vector<backends::ChatMessage>* conversation = nullptr,
                              const std::map<std::string, double>& location_scores = {});

}  // namespace egogen::grounding
