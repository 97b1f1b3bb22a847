// SPDX-License-Identifier: Apache-2.0
#include "egogen/ingest/parsers.hpp"

#include <boost/tokenizer.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "egogen/core/error.hpp"

namespace egogen::ingest {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_row(const std::string& line, char sep) {
  using Sep = boost::escaped_list_separator<char>;
  boost::tokenizer<Sep> tok(line, Sep('\\', sep, '"'));
  std::vector<std::string> out;
  for (const auto& t : tok) out.push_back(trim(t));
  return out;
}

double to_double(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("trailing characters in '" + text + "'");
  return v;
}

void add(ParseResult& result, ActionAnnotation a, const std::string& where) {
  try {
    a.validate();
    result.annotations.push_back(std::move(a));
  } catch (const Error& e) {
    ++result.skipped;
    result.skip_reasons.push_back(where + ": " + e.what());
  }
}

void skip(ParseResult& result, const std::string& where, const std::string& why) {
  ++result.skipped;
  result.skip_reasons.push_back(where + ": " + why);
}

/// Header-indexed CSV reader; `row` callback builds one annotation per line.
template <typename RowFn>
void parse_csv(const std::string& text, ParseResult& result, const std::vector<std::string>& required, RowFn&& row) {
  std::istringstream in(text);
  std::string header_line;
  while (std::getline(in, header_line) && trim(header_line).empty()) {}
  if (trim(header_line).empty()) return;
  const char sep = header_line.find(';') != std::string::npos ? ';' : ',';
  const auto header = split_row(header_line, sep);
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto& r : required) {
    if (!col.count(r)) throw Error(ErrorCode::SchemaMismatch, "annotation header lacks column '" + r + "'");
  }
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    try {
      const auto fields = split_row(line, sep);
      auto get = [&](const std::string& name) -> const std::string& {
        const auto i = col.at(name);
        if (i >= fields.size()) throw std::out_of_range("missing column '" + name + "'");
        return fields[i];
      };
      add(result, row(get, fields, header), where);
    } catch (const Error& e) {
      skip(result, where, e.what());
    } catch (const std::exception& e) {
      skip(result, where, e.what());
    }
  }
}

void parse_egtea(const std::string& text, ParseResult& result) {
  const std::vector<std::string> required = {"Video Session", "Starting Time (ms)", "Ending Time (ms)",
                                             "Action Label"};
  parse_csv(text, result, required, [](auto& get, const auto& fields, const auto& header) {
    ActionAnnotation a;
    a.dataset = DatasetTag::EGTEA;
    a.video_id = get("Video Session");
    a.t_start = to_double(get("Starting Time (ms)")) / 1000.0;
    a.t_end = to_double(get("Ending Time (ms)")) / 1000.0;
    a.action_text = get("Action Label");
    for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i) {
      if (header[i] == "Video Session" || header[i] == "Action Label") continue;
      a.metadata[header[i]] = fields[i];
    }
    return a;
  });
}

void parse_ek100(const std::string& text, ParseResult& result) {
  const std::vector<std::string> required = {"video_id", "start_timestamp", "stop_timestamp", "narration"};
  parse_csv(text, result, required, [](auto& get, const auto& fields, const auto& header) {
    ActionAnnotation a;
    a.dataset = DatasetTag::EK100;
    a.video_id = get("video_id");
    a.t_start = parse_clock(get("start_timestamp"));
    a.t_end = parse_clock(get("stop_timestamp"));
    a.action_text = get("narration");
    for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i) {
      if (header[i] == "video_id" || header[i] == "narration") continue;
      a.metadata[header[i]] = fields[i];
    }
    return a;
  });
}

std::string strip_narrator_tag(std::string text) {
  // Ego4D narrations read "#C C cuts the tomato"; the camera wearer marker is noise here.
  for (const char* prefix : {"#C C ", "#c c ", "#C ", "#c "}) {
    if (text.rfind(prefix, 0) == 0) return trim(text.substr(std::string(prefix).size()));
  }
  return trim(text);
}

void parse_ego4d(const std::string& text, ParseResult& result) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, std::string("Ego4D annotations are not JSON: ") + e.what());
  }
  if (!root.contains("videos") || !root.at("videos").is_array()) {
    throw Error(ErrorCode::SchemaMismatch, "Ego4D annotations lack a 'videos' array");
  }
  std::size_t vi = 0;
  for (const auto& video : root.at("videos")) {
    const std::string vloc = "videos[" + std::to_string(vi++) + "]";
    std::string uid;
    double fps = 30.0;
    try {
      uid = video.at("video_uid").get<std::string>();
      fps = video.value("fps", 30.0);
    } catch (const nlohmann::json::exception& e) {
      skip(result, vloc, e.what());
      continue;
    }
    std::size_t ii = 0;
    for (const auto& interval : video.value("annotated_intervals", nlohmann::json::array())) {
      std::size_t ai = 0;
      for (const auto& act : interval.value("narrated_actions", nlohmann::json::array())) {
        const std::string where = vloc + ".annotated_intervals[" + std::to_string(ii) + "].narrated_actions[" +
                                  std::to_string(ai++) + "]";
        try {
          if (!act.value("is_valid_action", true)) {
            skip(result, where, "marked invalid by the dataset");
            continue;
          }
          ActionAnnotation a;
          a.dataset = DatasetTag::Ego4D;
          a.video_id = uid;
          a.action_text = strip_narrator_tag(act.at("narration_text").get<std::string>());
          a.t_start = act.at("start_sec").get<double>();
          a.t_end = act.at("end_sec").get<double>();
          if (act.contains("critical_frames") && act.at("critical_frames").is_object()) {
            const auto& cf = act.at("critical_frames");
            if (cf.contains("pre_frame") && cf.contains("pnr_frame") && cf.contains("post_frame")) {
              a.keyframes = Keyframes{cf.at("pre_frame").get<double>() / fps, cf.at("pnr_frame").get<double>() / fps,
                                      cf.at("post_frame").get<double>() / fps};
            }
          }
          a.metadata["fps"] = std::to_string(fps);
          for (const char* k : {"uid", "structured_verb", "freeform_verb"}) {
            if (act.contains(k) && act.at(k).is_string()) a.metadata[k] = act.at(k).get<std::string>();
          }
          add(result, std::move(a), where);
        } catch (const nlohmann::json::exception& e) {
          skip(result, where, e.what());
        }
      }
      ++ii;
    }
  }
}

void parse_custom(const std::string& text, ParseResult& result) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    try {
      const auto j = nlohmann::json::parse(line);
      ActionAnnotation a;
      a.dataset = DatasetTag::Custom;
      a.video_id = j.at("video_id").get<std::string>();
      a.action_text = j.at("action_text").get<std::string>();
      a.t_start = j.at("t_start").get<double>();
      a.t_end = j.at("t_end").get<double>();
      if (j.contains("keyframes")) {
        const auto& k = j.at("keyframes");
        a.keyframes = Keyframes{k.at("pre").get<double>(), k.at("pnr").get<double>(), k.at("post").get<double>()};
      }
      if (j.contains("metadata")) {
        for (const auto& [key, value] : j.at("metadata").items()) {
          a.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
        }
      }
      add(result, std::move(a), where);
    } catch (const nlohmann::json::exception& e) {
      skip(result, where, e.what());
    }
  }
}

}  // namespace

double parse_clock(const std::string& text) {
  const std::string t = trim(text);
  double seconds = 0;
  std::size_t start = 0;
  int fields = 0;
  while (true) {
    const auto colon = t.find(':', start);
    const std::string part = t.substr(start, colon == std::string::npos ? std::string::npos : colon - start);
    if (part.empty()) throw std::invalid_argument("bad clock value '" + text + "'");
    seconds = seconds * 60.0 + to_double(part);
    if (++fields > 3) throw std::invalid_argument("bad clock value '" + text + "'");
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  return seconds;
}

ParseResult parse_annotations_text(const std::string& text, DatasetTag tag) {
  ParseResult result;
  switch (tag) {
    case DatasetTag::EGTEA: parse_egtea(text, result); break;
    case DatasetTag::EK100: parse_ek100(text, result); break;
    case DatasetTag::Ego4D: parse_ego4d(text, result); break;
    case DatasetTag::Custom: parse_custom(text, result); break;
  }
  if (result.annotations.empty()) {
    throw Error(ErrorCode::SchemaMismatch, "no " + std::string(to_string(tag)) + " annotation records parsed (" +
                                               std::to_string(result.skipped) + " skipped)");
  }
  return result;
}

ParseResult parse_annotations(const std::filesystem::path& source, DatasetTag tag) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingInput, "cannot open annotations " + source.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_annotations_text(buf.str(), tag);
}

}  // namespace egogen::ingest
