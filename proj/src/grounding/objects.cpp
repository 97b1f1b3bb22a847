// SPDX-License-Identifier: Apache-2.0
#include "egogen/grounding/objects.hpp"

#include <algorithm>
#include <array>

#include "egogen/core/error.hpp"
#include "egogen/grounding/replies.hpp"

namespace egogen::grounding {
namespace {

using backends::ChatMessage;

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

std::string_view to_string(Category category) {
  switch (category) {
    case Category::Core: return "core";
    case Category::Location: return "location";
    case Category::Functional: return "functional";
  }
  return "functional";
}

Category category_from_string(std::string_view text) {
  if (text == "core") return Category::Core;
  if (text == "location") return Category::Location;
  if (text == "functional") return Category::Functional;
  throw Error(ErrorCode::SchemaMismatch, "unknown object category '" + std::string(text) + "'");
}

std::vector<std::string> RelevantObjectSet::all_names() const {
  std::vector<std::string> out = core;
  out.insert(out.end(), location.begin(), location.end());
  out.insert(out.end(), functional.begin(), functional.end());
  return out;
}

std::optional<Category> RelevantObjectSet::category_of(const std::string& name) const {
  if (contains(core, name)) return Category::Core;
  if (contains(location, name)) return Category::Location;
  if (contains(functional, name)) return Category::Functional;
  return std::nullopt;
}

CategorizeOutcome categorize_objects(const std::string& action, const Frame& frame,
                                     backends::VisionLanguageBackend& vlm, const PromptSet& prompts,
                                     const CategorizeOptions& options) {
  CategorizeOutcome out;
  out.objects.action = action;

  backends::ChatRequest request;
  request.action = action;
  request.messages.push_back({ChatMessage::Role::User, render(prompts.identify, {{"action", action}}), frame});
  const std::string first = vlm.chat(request);
  request.messages.push_back({ChatMessage::Role::Assistant, first, std::nullopt});
  const auto relevant = parse_object_list(first);

  if (!relevant.empty()) {
    request.messages.push_back(
        {ChatMessage::Role::User, render(prompts.categorize, {{"action", action}, {"objects", join_names(relevant)}}),
         std::nullopt});
    const std::string second = vlm.chat(request);
    request.messages.push_back({ChatMessage::Role::Assistant, second, std::nullopt});
    const CategoryReply reply = parse_category_reply(second);

    auto listed = [](const std::optional<std::vector<std::string>>& c, const std::string& name) {
      return c && contains(*c, name);
    };
    for (const auto& name : relevant) {
      if (listed(reply.core, name)) {
        out.objects.core.push_back(name);
      } else if (listed(reply.location, name)) {
        out.objects.location.push_back(name);
      } else if (listed(reply.functional, name)) {
        out.objects.functional.push_back(name);
      } else {
        out.objects.functional.push_back(name);
        out.warnings.push_back("no category for '" + name + "', treated as functional");
      }
    }
    const std::array<std::pair<const std::optional<std::vector<std::string>>*, std::vector<std::string>*>, 3> cats{
        {{&reply.core, &out.objects.core},
         {&reply.location, &out.objects.location},
         {&reply.functional, &out.objects.functional}}};
    for (const auto& [cat, dest] : cats) {
      if (!*cat) continue;
      for (const auto& name : **cat) {
        if (contains(relevant, name)) continue;
        // Hands are rarely listed as visible objects but are always a valid assistant.
        if (name == "hand" && !out.objects.category_of(name)) {
          dest->push_back(name);
          continue;
        }
        out.warnings.push_back("ignored '" + name + "', not among the relevant objects");
      }
    }
  }

  if (options.auto_append_hands && !out.objects.category_of("hand")) out.objects.functional.emplace_back("hand");
  if (out.objects.empty()) throw Error(ErrorCode::EmptyRelevantSet, "no relevant objects for '" + action + "'");
  out.conversation = std::move(request.messages);
  return out;
}

RefineOutcome refine_location(const RelevantObjectSet& objects, const Frame& frame,
                              backends::VisionLanguageBackend& vlm, const PromptSet& prompts,
                              const std::vector<backends::ChatMessage>* conversation,
                              const std::map<std::string, double>& location_scores) {
  if (objects.location.empty()) throw Error(ErrorCode::PreconditionViolation, "refine_location needs a location object");
  RefineOutcome out;
  out.objects = objects;
  if (objects.location.size() == 1) return out;

  std::optional<std::string> chosen;
  try {
    backends::ChatRequest request;
    request.action = objects.action;
    if (conversation && !conversation->empty()) {
      request.messages = *conversation;
    }
    const std::string question =
        render(prompts.refine_location, {{"action", objects.action}, {"locations", join_names(objects.location)}});
    if (request.messages.empty()) {
      request.messages.push_back({ChatMessage::Role::User, question, frame});
    } else {
      request.messages.push_back({ChatMessage::Role::User, question, std::nullopt});
    }
    const std::string answer = normalize_object_name(vlm.chat(request));
    // Exact answer first, then the longest candidate the answer mentions.
    for (const auto& name : objects.location) {
      if (answer == name) chosen = name;
    }
    if (!chosen) {
      for (const auto& name : objects.location) {
        if (answer.find(name) != std::string::npos && (!chosen || name.size() > chosen->size())) chosen = name;
      }
    }
    if (!chosen) out.note = "answer '" + answer + "' names no candidate";
  } catch (const Error& e) {
    if (!is_backend_error(e.code())) throw;
    out.note = e.what();
  }

  if (!chosen) {
    out.flagged = true;
    chosen = objects.location.front();
    double best = -1;
    for (const auto& name : objects.location) {
      const auto it = location_scores.find(name);
      if (it != location_scores.end() && it->second > best) {
        best = it->second;
        chosen = name;
      }
    }
  }
  out.objects.location = {*chosen};
  return out;
}

}  // namespace egogen::grounding
