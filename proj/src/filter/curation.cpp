// SPDX-License-Identifier: Apache-2.0
#include "egogen/filter/curation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "egogen/core/error.hpp"
#include "egogen/core/image_io.hpp"

namespace egogen::filter {
namespace fs = std::filesystem;

std::vector<BenchmarkRecord> read_benchmark(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingInput, "cannot open benchmark " + path.string());
  std::vector<BenchmarkRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      BenchmarkRecord r;
      r.video_id = j.at("video_id").get<std::string>();
      r.action_text = j.at("action_text").get<std::string>();
      r.t_start = j.at("t_start").get<double>();
      const auto& fp = j.at("frame_paths");
      r.frame_paths = {fp.at("initial").get<std::string>(), fp.at("action").get<std::string>(),
                       fp.at("final").get<std::string>()};
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::SchemaMismatch, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string alignment_key(const std::string& video_id, const std::string& action_text, double t_start) {
  return video_id + '\x1f' + action_text + '\x1f' + std::to_string(std::llround(t_start * 1000.0));
}

std::vector<CurationScore> score_curation(const std::vector<CurationSample>& samples,
                                          backends::EmbeddingBackend& embedder, double threshold) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "no curation samples to score");
  std::vector<CurationScore> scores;
  for (std::size_t k = 0; k < 3; ++k) {
    CurationScore s;
    s.frame_kind = kAllFrameKinds[k];
    s.n = samples.size();
    double sum_cos = 0;
    std::size_t above = 0;
    for (const auto& sample : samples) {
      const double cos = backends::cosine(embedder.embed(sample.automatic[k]), embedder.embed(sample.manual[k]));
      sum_cos += cos;
      if (100.0 * cos >= threshold) ++above;
    }
    s.mean_cosine = sum_cos / static_cast<double>(samples.size());
    s.mean_clip = 100.0 * s.mean_cosine;
    s.quantile_ge_80 = static_cast<double>(above) / static_cast<double>(samples.size());
    scores.push_back(s);
  }
  return scores;
}

std::vector<CurationSample> align_benchmark(const fs::path& auto_manifest,
                                            const std::vector<ingest::ManifestEntry>& automatic,
                                            const fs::path& benchmark_path,
                                            const std::vector<BenchmarkRecord>& manual) {
  std::map<std::string, const BenchmarkRecord*> by_key;
  for (const auto& r : manual) by_key[alignment_key(r.video_id, r.action_text, r.t_start)] = &r;

  std::vector<CurationSample> samples;
  for (const auto& e : automatic) {
    const auto& a = e.triplet.annotation;
    const auto it = by_key.find(alignment_key(a.video_id, a.action_text, a.t_start));
    if (it == by_key.end()) continue;
    CurationSample s;
    for (std::size_t k = 0; k < 3; ++k) {
      const auto auto_path = ingest::resolve_frame_path(auto_manifest, e.triplet.frame_paths.get(k));
      const auto manual_path = ingest::resolve_frame_path(benchmark_path, it->second->frame_paths.get(k));
      s.automatic[k] = Frame{auto_path.stem().string(), read_image(auto_path)};
      s.manual[k] = Frame{manual_path.stem().string(), read_image(manual_path)};
    }
    samples.push_back(std::move(s));
  }
  if (samples.empty()) {
    throw Error(ErrorCode::AlignmentMismatch, "no triplet shares (video_id, action_text, t_start) with the benchmark");
  }
  return samples;
}

nlohmann::json to_json(const CurationScore& s) {
  return {{"frame_kind", to_string(s.frame_kind)},
          {"mean_clip", s.mean_clip},
          {"quantile_ge_80", s.quantile_ge_80},
          {"mean_cosine", s.mean_cosine},
          {"n", s.n}};
}

}  // namespace egogen::filter
