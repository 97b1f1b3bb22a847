// SPDX-License-Identifier: Apache-2.0
#include "egogen/pipeline/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>

#include "egogen/core/error.hpp"

namespace egogen::pipeline {

namespace fs = std::filesystem;
using backends::BackendDescriptor;
using backends::BackendKind;

namespace {

constexpr std::array<BackendKind, 4> kKinds{BackendKind::Vlm, BackendKind::Detector, BackendKind::Inpainter,
                                            BackendKind::Embedder};

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); }

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) invalid(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) invalid("unknown key '" + k + "' in " + where);
  }
}

std::string resolve(const std::string& path, const fs::path& base) {
  if (path.empty() || fs::path(path).is_absolute() || base.empty()) return path;
  return (base / path).lexically_normal().string();
}

std::optional<std::string> system_env(const char* name) {
  const char* v = std::getenv(name);
  if (!v) return std::nullopt;
  return std::string(v);
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

double parse_seconds(const std::string& text, const std::string& name) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    invalid(name + " is not a number: '" + text + "'");
  }
}

}  // namespace

PipelineConfig::PipelineConfig() {
  for (auto kind : kKinds) backends[static_cast<std::size_t>(kind)].kind = kind;
}

BackendDescriptor& PipelineConfig::backend(BackendKind kind) { return backends[static_cast<std::size_t>(kind)]; }
const BackendDescriptor& PipelineConfig::backend(BackendKind kind) const {
  return backends[static_cast<std::size_t>(kind)];
}

void PipelineConfig::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(detection_threshold)) invalid("detection_threshold must be in [0, 1]");
  if (hand_threshold && !unit(*hand_threshold)) invalid("hand_threshold must be in [0, 1]");
  if (!(similarity_threshold >= 0 && similarity_threshold <= 100)) invalid("similarity_threshold must be in [0, 100]");
  if (!(split_ratio > 0 && split_ratio < 1)) invalid("split.ratio must be in (0, 1)");
  if (epochs < 1) invalid("finetune.epochs must be >= 1");
  if (workers < 1) invalid("workers must be >= 1");
  if (!selection_strategy.empty() && selection_strategy != "paper" && selection_strategy != "lego" &&
      selection_strategy != "keyframes") {
    invalid("selection_strategy must be paper, lego or keyframes");
  }
  for (const auto& d : backends) d.validate();
}

PipelineConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  check_keys(j,
             {"detection_threshold", "hand_threshold", "similarity_threshold", "selection_strategy", "seed", "split",
              "finetune", "workers", "method", "prompts_dir", "audit_log", "flags", "backends"},
             "config");
  PipelineConfig c;
  try {
    c.detection_threshold = j.value("detection_threshold", c.detection_threshold);
    if (j.contains("hand_threshold") && !j["hand_threshold"].is_null()) c.hand_threshold = j["hand_threshold"].get<double>();
    c.similarity_threshold = j.value("similarity_threshold", c.similarity_threshold);
    c.selection_strategy = j.value("selection_strategy", c.selection_strategy);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    c.method = j.value("method", c.method);
    c.prompts_dir = resolve(j.value("prompts_dir", std::string()), base_dir);
    c.audit_log = resolve(j.value("audit_log", std::string()), base_dir);
    if (j.contains("split")) {
      const auto& s = j["split"];
      check_keys(s, {"ratio", "seed"}, "split");
      c.split_ratio = s.value("ratio", c.split_ratio);
      c.split_seed = s.value("seed", c.split_seed);
    }
    if (j.contains("finetune")) {
      const auto& f = j["finetune"];
      check_keys(f, {"epochs", "aux_loss_weight"}, "finetune");
      c.epochs = f.value("epochs", c.epochs);
      if (f.contains("aux_loss_weight") && !f["aux_loss_weight"].is_null()) {
        c.aux_loss_weight = f["aux_loss_weight"].get<double>();
      }
    }
    if (j.contains("flags")) {
      const auto& f = j["flags"];
      check_keys(f, {"auto_append_hands", "mclip_crop", "full_frame_fallback"}, "flags");
      c.flags.auto_append_hands = f.value("auto_append_hands", c.flags.auto_append_hands);
      c.flags.mclip_crop = f.value("mclip_crop", c.flags.mclip_crop);
      c.flags.full_frame_fallback = f.value("full_frame_fallback", c.flags.full_frame_fallback);
    }
    if (j.contains("backends")) {
      const auto& b = j["backends"];
      check_keys(b, {"vlm", "detector", "inpainter", "embedder"}, "backends");
      for (auto kind : kKinds) {
        const std::string name(backends::to_string(kind));
        if (!b.contains(name)) continue;
        const auto& e = b[name];
        check_keys(e, {"endpoint", "model_tag", "timeout", "max_concurrency", "fixture", "native_width", "native_height"},
                   "backends." + name);
        auto& d = c.backend(kind);
        d.endpoint = e.value("endpoint", d.endpoint);
        d.model_tag = e.value("model_tag", d.model_tag);
        d.timeout = e.value("timeout", d.timeout);
        d.max_concurrency = e.value("max_concurrency", d.max_concurrency);
        d.fixture = resolve(e.value("fixture", d.fixture), base_dir);
        d.native_width = e.value("native_width", d.native_width);
        d.native_height = e.value("native_height", d.native_height);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("config value has the wrong type: ") + e.what());
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    invalid("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

nlohmann::json to_json(const PipelineConfig& c) {
  nlohmann::json b = nlohmann::json::object();
  for (const auto& d : c.backends) {
    b[std::string(backends::to_string(d.kind))] = {{"endpoint", d.endpoint},
                                                   {"model_tag", d.model_tag},
                                                   {"timeout", d.timeout},
                                                   {"max_concurrency", d.max_concurrency},
                                                   {"fixture", d.fixture},
                                                   {"native_width", d.native_width},
                                                   {"native_height", d.native_height}};
  }
  nlohmann::json hand = nullptr;
  if (c.hand_threshold) hand = *c.hand_threshold;
  nlohmann::json aux = nullptr;
  if (c.aux_loss_weight) aux = *c.aux_loss_weight;
  return {{"detection_threshold", c.detection_threshold},
          {"hand_threshold", hand},
          {"similarity_threshold", c.similarity_threshold},
          {"selection_strategy", c.selection_strategy},
          {"seed", c.seed},
          {"split", {{"ratio", c.split_ratio}, {"seed", c.split_seed}}},
          {"finetune", {{"epochs", c.epochs}, {"aux_loss_weight", aux}}},
          {"workers", c.workers},
          {"method", c.method},
          {"prompts_dir", c.prompts_dir},
          {"audit_log", c.audit_log},
          {"flags",
           {{"auto_append_hands", c.flags.auto_append_hands},
            {"mclip_crop", c.flags.mclip_crop},
            {"full_frame_fallback", c.flags.full_frame_fallback}}},
          {"backends", b}};
}

void apply_env_overrides(PipelineConfig& config, EnvLookup getenv_fn) {
  if (!getenv_fn) getenv_fn = system_env;
  std::optional<double> shared_timeout;
  if (auto v = getenv_fn("EGOGEN_TIMEOUT")) shared_timeout = parse_seconds(*v, "EGOGEN_TIMEOUT");
  for (auto kind : kKinds) {
    auto& d = config.backend(kind);
    const std::string prefix = "EGOGEN_" + upper(backends::to_string(kind));
    if (auto v = getenv_fn((prefix + "_ENDPOINT").c_str())) d.endpoint = *v;
    if (shared_timeout) d.timeout = *shared_timeout;
    if (auto v = getenv_fn((prefix + "_TIMEOUT").c_str())) d.timeout = parse_seconds(*v, prefix + "_TIMEOUT");
  }
  config.validate();
}

void apply_backend_mode(PipelineConfig& config, const std::string& mode) {
  if (mode.empty()) return;
  if (mode == "mock") {
    for (auto& d : config.backends) d.endpoint = "mock";
    return;
  }
  if (mode != "remote") invalid("--backend must be mock or remote");
  for (const auto& d : config.backends) {
    if (d.endpoint.rfind("http://", 0) != 0 && d.endpoint.rfind("https://", 0) != 0) {
      invalid(std::string("remote mode needs an http(s) endpoint for the ") + std::string(backends::to_string(d.kind)) +
              " backend");
    }
  }
}

}  // namespace egogen::pipeline
