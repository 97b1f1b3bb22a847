// SPDX-License-Identifier: Apache-2.0
#include "egogen/grounding/replies.hpp"

#include <algorithm>
#include <cctype>

#include "egogen/core/error.hpp"

namespace egogen::grounding {
namespace {

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s, std::string_view chars = " \t\r\n") {
  const auto first = s.find_first_not_of(chars);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(chars);
  return std::string(s.substr(first, last - first + 1));
}

std::string strip_bullet(std::string line) {
  line = trim(line);
  std::size_t i = 0;
  while (i < line.size() && (line[i] == '-' || line[i] == '*' || line[i] == '+')) ++i;
  if (line.compare(i, 3, "\xE2\x80\xA2") == 0) i += 3;  // U+2022 bullet
  std::size_t d = i;
  while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) ++d;
  if (d > i && d < line.size() && (line[d] == '.' || line[d] == ')')) i = d + 1;
  return trim(line.substr(i));
}

bool is_none(const std::string& s) {
  const std::string l = lower(trim(s, " \t\r\n.!"));
  return l.empty() || l == "none" || l == "n/a" || l == "nothing" || l == "no objects" || l == "-";
}

std::vector<std::string> split_items(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ',' || c == ';') {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  // "x and y" as the final separator
  std::vector<std::string> out;
  for (auto& p : parts) {
    std::string t = trim(p);
    if (t.rfind("and ", 0) == 0) t = t.substr(4);
    const auto pos = t.find(" and ");
    if (pos != std::string::npos) {
      out.push_back(t.substr(0, pos));
      out.push_back(t.substr(pos + 5));
    } else {
      out.push_back(t);
    }
  }
  return out;
}

bool looks_like_name(const std::string& item) {
  int words = 0;
  bool in_word = false;
  for (char c : item) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == ' ' || c == '-' || c == '\'' || c == '/' || u >= 0x80)) return false;
    if (c == ' ') {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++words;
    }
  }
  return words >= 1 && words <= 4;
}

void append_items(const std::string& text, std::vector<std::string>& out) {
  if (is_none(text)) return;
  for (const auto& raw : split_items(text)) {
    if (is_none(raw)) continue;
    const std::string name = normalize_object_name(raw);
    if (name.empty()) continue;
    if (!looks_like_name(name)) {
      throw Error(ErrorCode::MalformedBackendReply, "reply item '" + trim(raw) + "' is not an object name");
    }
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
}

}  // namespace

std::string normalize_object_name(std::string_view raw) {
  std::string s = lower(trim(raw, " \t\r\n.!?\"'`*:"));
  std::string collapsed;
  for (char c : s) {
    if (c == ' ' && !collapsed.empty() && collapsed.back() == ' ') continue;
    collapsed += c;
  }
  for (const char* article : {"a ", "an ", "the ", "some "}) {
    if (collapsed.rfind(article, 0) == 0) {
      collapsed = collapsed.substr(std::string(article).size());
      break;
    }
  }
  if (collapsed == "hands" || collapsed == "human hand" || collapsed == "human hands") collapsed = "hand";
  return collapsed;
}

std::vector<std::string> parse_object_list(std::string_view reply) {
  std::vector<std::string> out;
  std::string text(reply);
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    std::string line = strip_bullet(text.substr(start, nl - start));
    start = nl + 1;
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon != std::string::npos) {
      const std::string rest = trim(line.substr(colon + 1));
      if (rest.empty()) continue;  // a heading such as "Relevant objects:"
      line = rest;
    }
    append_items(line, out);
  }
  return out;
}

CategoryReply parse_category_reply(std::string_view reply) {
  CategoryReply out;
  std::string text(reply);
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = strip_bullet(text.substr(start, nl - start));
    start = nl + 1;
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string head = lower(line.substr(0, colon));
    std::optional<std::vector<std::string>>* slot = nullptr;
    if (head.find("core") != std::string::npos) slot = &out.core;
    else if (head.find("location") != std::string::npos) slot = &out.location;
    else if (head.find("functional") != std::string::npos) slot = &out.functional;
    if (!slot) continue;
    try {
      std::vector<std::string> items;
      append_items(trim(line.substr(colon + 1)), items);
      *slot = std::move(items);
    } catch (const Error&) {
      // leave the category unparsed
    }
  }
  return out;
}

}  // namespace egogen::grounding
