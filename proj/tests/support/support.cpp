// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "egogen/core/digest.hpp"
#include "egogen/core/image_io.hpp"
#include "egogen/pipeline/config.hpp"
#include "egogen/pipeline/stages.hpp"

namespace egogen::testing {

fs::path source_dir() { return EGOGEN_SOURCE_DIR; }
fs::path mock5_dir() { return source_dir() / "fixtures" / "mock5"; }

TempDir::TempDir() {
  std::random_device rd;
  const auto base = fs::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = base / ("egogen-test-" + std::to_string(rd()) + std::to_string(rd()));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("could not create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

Image random_image(int width, int height, int channels, std::mt19937_64& rng) {
  Image img(width, height, channels);
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(byte(rng));
  return img;
}

Image constant_image(int width, int height, int channels, std::uint8_t value) {
  return Image(width, height, channels, value);
}

Mask random_mask(int width, int height, std::mt19937_64& rng, double density) {
  Mask m(width, height);
  std::bernoulli_distribution on(density);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (on(rng)) m.set(x, y);
    }
  }
  return m;
}

Snapshot snapshot_tree(const fs::path& root) {
  Snapshot out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = entry.path().lexically_relative(root).generic_string();
    if (entry.path().filename() == "audit.jsonl") continue;
    if (entry.path().extension() == ".png") {
      const Image img = read_image(entry.path());
      std::string bytes = std::to_string(img.width()) + "x" + std::to_string(img.height()) + "x" +
                          std::to_string(img.channels()) + ":";
      bytes.append(reinterpret_cast<const char*>(img.pixels().data()), img.pixels().size());
      out[rel] = "px:" + sha256_hex(bytes);
    } else {
      std::ifstream in(entry.path(), std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      out[rel] = sha256_hex(ss.str());
    }
  }
  return out;
}

std::string format_snapshot(const Snapshot& snapshot) {
  std::string text;
  for (const auto& [path, digest] : snapshot) text += digest + "  " + path + "\n";
  return text;
}

Snapshot parse_snapshot(const std::string& text) {
  Snapshot out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto sep = line.find("  ");
    if (line.empty() || sep == std::string::npos) continue;
    out[line.substr(sep + 2)] = line.substr(0, sep);
  }
  return out;
}

void run_mock5(const fs::path& out, const fs::path& audit, int workers) {
  using namespace egogen::pipeline;
  const auto fixture = mock5_dir();
  PipelineConfig config = load_config(fixture / "config.json");
  config.audit_log = audit.string();
  config.workers = workers;

  auto check = [](const StageSummary& s) {
    if (s.exit_code() != 0) throw std::runtime_error(s.stage + " failed: " + s.first_message);
  };
  const auto manifest = out / "manifest.jsonl";
  const auto kept = out / "kept.jsonl";
  check(run_curate(config, {"egtea", fixture / "annotations" / "action_labels.csv", fixture / "videos", "", manifest}));
  check(run_filter(config, {manifest, kept, std::nullopt}));
  check(run_score_curation(config, {kept, fixture / "benchmark" / "bench.jsonl", out / "curation.json"}));
  check(run_ground(config, {kept, out / "masks", {}}));
  check(run_generate(config, {kept, out / "masks", "both", std::nullopt, out / "gen"}));
  for (const std::string target : {"action", "final"}) {
    EvaluateArgs ev;
    ev.generated = out / "gen";
    ev.gt = kept;
    ev.masks = out / "masks";
    ev.target = target;
    ev.out = out / ("report_" + target + ".json");
    ev.table = out / ("report_" + target + ".txt");
    check(run_evaluate(config, ev));
    check(run_finetune_prep(config, {kept, out / "masks", target, out / ("job_" + target + ".json"),
                                     out / ("test_" + target + ".jsonl")}));
  }
}

}  // namespace egogen::testing
