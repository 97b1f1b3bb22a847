// SPDX-License-Identifier: Apache-2.0
#include "egogen/ingest/manifest.hpp"

#include <fstream>

#include "egogen/core/error.hpp"

namespace egogen::ingest {
namespace fs = std::filesystem;

namespace {

const char* const kTripletFields[] = {"key",       "video_id",   "action_text", "t_start",
                                      "t_end",     "t_initial",  "t_action",    "t_final",
                                      "frame_paths", "selection_strategy", "dataset_tag", "frame_times",
                                      "flags",     "keyframes",  "metadata"};

}  // namespace

nlohmann::json to_json(const ActionTriplet& t) {
  nlohmann::json j;
  j["key"] = t.key;
  j["video_id"] = t.annotation.video_id;
  j["action_text"] = t.annotation.action_text;
  j["t_start"] = t.annotation.t_start;
  j["t_end"] = t.annotation.t_end;
  j["t_initial"] = t.t_initial;
  j["t_action"] = t.t_action;
  j["t_final"] = t.t_final;
  j["frame_paths"] = {{"initial", t.frame_paths.initial},
                      {"action", t.frame_paths.action},
                      {"final", t.frame_paths.final}};
  j["selection_strategy"] = to_string(t.strategy);
  j["dataset_tag"] = to_string(t.annotation.dataset);
  if (t.frame_times) {
    j["frame_times"] = {{"initial", (*t.frame_times)[0]}, {"action", (*t.frame_times)[1]}, {"final", (*t.frame_times)[2]}};
  }
  j["flags"] = t.flags;
  if (t.annotation.keyframes) {
    const auto& k = *t.annotation.keyframes;
    j["keyframes"] = {{"pre", k.pre}, {"pnr", k.pnr}, {"post", k.post}};
  }
  if (!t.annotation.metadata.empty()) j["metadata"] = t.annotation.metadata;
  return j;
}

ActionTriplet triplet_from_json(const nlohmann::json& j) {
  ActionTriplet t;
  t.annotation.video_id = j.at("video_id").get<std::string>();
  t.annotation.action_text = j.at("action_text").get<std::string>();
  t.annotation.t_start = j.at("t_start").get<double>();
  t.annotation.t_end = j.at("t_end").get<double>();
  t.annotation.dataset = dataset_tag_from_string(j.at("dataset_tag").get<std::string>());
  t.key = j.contains("key") ? j.at("key").get<std::string>()
                            : t.annotation.video_id + "_" + std::to_string(std::llround(t.annotation.t_start * 1000));
  t.t_initial = j.at("t_initial").get<double>();
  t.t_action = j.at("t_action").get<double>();
  t.t_final = j.at("t_final").get<double>();
  const auto& fp = j.at("frame_paths");
  if (fp.is_object()) {
    t.frame_paths = {fp.value("initial", ""), fp.value("action", ""), fp.value("final", "")};
  } else {
    const auto list = fp.get<std::vector<std::string>>();
    if (list.size() != 3) throw Error(ErrorCode::SchemaMismatch, "frame_paths needs three entries");
    t.frame_paths = {list[0], list[1], list[2]};
  }
  t.strategy = strategy_from_string(j.at("selection_strategy").get<std::string>());
  if (j.contains("frame_times")) {
    const auto& ft = j.at("frame_times");
    t.frame_times = std::array<double, 3>{ft.at("initial").get<double>(), ft.at("action").get<double>(),
                                          ft.at("final").get<double>()};
  }
  if (j.contains("flags")) t.flags = j.at("flags").get<std::vector<std::string>>();
  if (j.contains("keyframes")) {
    const auto& k = j.at("keyframes");
    t.annotation.keyframes = Keyframes{k.at("pre").get<double>(), k.at("pnr").get<double>(), k.at("post").get<double>()};
  }
  if (j.contains("metadata")) t.annotation.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
  return t;
}

nlohmann::json to_json(const ManifestEntry& entry) {
  nlohmann::json j = to_json(entry.triplet);
  for (const auto& [k, v] : entry.extra.items()) j[k] = v;
  return j;
}

ManifestEntry entry_from_json(const nlohmann::json& j) {
  ManifestEntry e;
  e.triplet = triplet_from_json(j);
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* f : kTripletFields) known = known || k == f;
    if (!known) e.extra[k] = v;
  }
  return e;
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingInput, "cannot open manifest " + path.string());
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(entry_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::SchemaMismatch, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::SchemaMismatch, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_manifest(const fs::path& path, const std::vector<ManifestEntry>& entries) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Internal, "cannot write manifest " + path.string());
  for (const auto& e : entries) out << to_json(e).dump() << '\n';
}

fs::path resolve_frame_path(const fs::path& manifest_path, const std::string& frame_path) {
  const fs::path p(frame_path);
  if (p.is_absolute()) return p;
  return manifest_path.parent_path() / p;
}

}  // namespace egogen::ingest
