// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace egogen::grounding {

/// Versioned text templates for the object-relevance conversation.
/// Placeholders: {action}, {objects}, {locations}.
struct PromptSet {
  std::string version = "v1";
  std::string identify;         ///< turn 1: relevant visible objects
  std::string categorize;       ///< turn 2: core / location / functional
  std::string refine_location;  ///< turn 3: single most specific location

  /// Templates compiled into the binary (identical to prompts/v1/).
  static PromptSet builtin();
  /// Reads identify.txt, categorize.txt and refine_location.txt; the
  /// directory name becomes the version. MissingInput when a file is absent.
  static PromptSet load(const std::filesystem::path& dir);
};

std::string render(const std::string& tmpl, const std::map<std::string, std::string>& values);

/// "a, b and c" style list for prompts.
std::string join_names(const std::vector<std::string>& names);

}  // namespace egogen::grounding
