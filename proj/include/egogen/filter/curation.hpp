// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egogen/backends/backend.hpp"
#include "egogen/core/frame_kind.hpp"
#include "egogen/ingest/manifest.hpp"

namespace egogen::filter {

inline constexpr double kDefaultSimilarityThreshold = 80.0;

struct CurationScore {
  FrameKind frame_kind = FrameKind::Initial;
  double mean_clip = 0;       ///< mean of 100 x cosine
  double quantile_ge_80 = 0;  ///< fraction of pairs scoring >= threshold
  double mean_cosine = 0;     ///< raw
  std::size_t n = 0;
};

/// A human-selected benchmark triplet: {video_id, action_text, t_start,
/// frame_paths: {initial, action, final}} per JSONL line.
struct BenchmarkRecord {
  std::string video_id;
  std::string action_text;
  double t_start = 0;
  ingest::FramePaths frame_paths;
};

std::vector<BenchmarkRecord> read_benchmark(const std::filesystem::path& path);

/// Benchmark alignment key: video_id, action_text and t_start to the millisecond.
std::string alignment_key(const std::string& video_id, const std::string& action_text, double t_start);

struct CurationSample {
  std::array<Frame, 3> automatic;  ///< initial, action, final
  std::array<Frame, 3> manual;
};

/// Per-frame-kind similarity between automatically selected and benchmark
/// frames. EmptyInput without samples.
std::vector<CurationScore> score_curation(const std::vector<CurationSample>& samples,
                                          backends::EmbeddingBackend& embedder,
                                          double threshold = kDefaultSimilarityThreshold);

/// Loads the frames of every automatic entry whose key appears in the
/// benchmark. AlignmentMismatch when nothing aligns.
std::vector<CurationSample> align_benchmark(const std::filesystem::path& auto_manifest,
                                            const std::vector<ingest::ManifestEntry>& automatic,
                                            const std::filesystem::path& benchmark_path,
                                            const std::vector<BenchmarkRecord>& manual);

nlohmann::json to_json(const CurationScore& score);

}  // namespace egogen::filter
