// SPDX-License-Identifier: Apache-2.0
#include "egogen/grounding/prompts.hpp"

#include <fstream>
#include <sstream>

#include "egogen/core/error.hpp"

namespace egogen::grounding {
namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingInput, "missing prompt template " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

PromptSet PromptSet::builtin() {
  PromptSet p;
  p.version = "v1";
  p.identify =
      "This is a first-person photo of a kitchen. The person is about to perform the action \"{action}\".\n"
      "Which objects visible in this image are relevant to performing that action?\n"
      "Reply with a comma-separated list of object names and nothing else. Reply \"none\" if no relevant object is "
      "visible.\n";
  p.categorize =
      "Sort these objects for the action \"{action}\": {objects}.\n"
      "Core: the object the action is performed on, which is changed or moved by it.\n"
      "Location: an object that marks where things are before the action or where they end up after it.\n"
      "Functional: a tool or body part that helps perform the action without moving other objects; its position "
      "does not matter.\n"
      "Use every listed object exactly once and reply in exactly three lines:\n"
      "Core objects: <names or none>\n"
      "Location objects: <names or none>\n"
      "Functional objects: <names or none>\n";
  p.refine_location =
      "For the action \"{action}\" these objects were marked as locations: {locations}.\n"
      "Which one of them names the destination of the action most precisely?\n"
      "Reply with exactly one object name from the list.\n";
  return p;
}

PromptSet PromptSet::load(const std::filesystem::path& dir) {
  PromptSet p;
  auto name = dir.filename();
  if (name.empty()) name = dir.parent_path().filename();
  p.version = name.string();
  p.identify = read_text(dir / "identify.txt");
  p.categorize = read_text(dir / "categorize.txt");
  p.refine_location = read_text(dir / "refine_location.txt");
  return p;
}

std::string render(const std::string& tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i);
      if (close != std::string::npos) {
        const auto it = values.find(tmpl.substr(i + 1, close - i - 1));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i++];
  }
  return out;
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += (i + 1 == names.size()) ? " and " : ", ";
    out += names[i];
  }
  return out;
}

}  // namespace egogen::grounding
