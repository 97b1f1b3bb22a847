// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace egogen::grounding {

/// Lowercased, trimmed object name with articles dropped; "hands" becomes "hand".
std::string normalize_object_name(std::string_view raw);

/// Parses a reply that should be a list of short noun phrases: comma / "and"
/// separated, or one item per line with optional bullets or numbering. A
/// "label: items" prefix is ignored, as is "none". Items are normalized and
/// deduplicated in first-seen order. MalformedBackendReply when any item reads
/// as prose rather than an object name.
std::vector<std::string> parse_object_list(std::string_view reply);

struct CategoryReply {
  std::optional<std::vector<std::string>> core;
  std::optional<std::vector<std::string>> location;
  std::optional<std::vector<std::string>> functional;
};

/// Finds "Core ...: x", "Location ...: y", "Functional ...: z" lines. A
/// category whose line is missing or unparseable stays nullopt.
CategoryReply parse_category_reply(std::string_view reply);

}  // namespace egogen::grounding
