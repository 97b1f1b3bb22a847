// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egogen/metrics/metrics.hpp"

namespace egogen::metrics {

struct PairScore {
  std::string key;
  double clip = 0;    ///< x100
  double m_clip = 0;  ///< x100
  double d_clip = 0;  ///< percent
  double psnr = 0;    ///< dB, +inf for identical images
  double ssim = 0;    ///< x100
  double clip_cosine = 0;
  double reference_cosine = 0;  ///< cos(f_in, ground truth)
  double generated_cosine = 0;  ///< cos(f_in, generated)
  bool m_clip_fell_back = false;
};

/// Inputs for one evaluated pair. The mask is the union of the rasters the
/// generator edited for this target.
struct PairInput {
  std::string key;
  Image f_in;
  Image ground_truth;
  Image generated;
  Mask mask;
};

PairScore score_pair(const PairInput& pair, backends::EmbeddingBackend& embedder, const MClipOptions& options = {});

struct MetricReport {
  std::string dataset;
  std::string target;
  std::string method;
  double clip = 0;
  double m_clip = 0;
  double d_clip = 0;
  double psnr = 0;  ///< mean over finite values
  double ssim = 0;
  std::optional<FidResult> fid;  ///< absent when a set has fewer than two images
  std::size_t n_pairs = 0;
  std::size_t n_psnr_infinite = 0;
  std::vector<PairScore> pairs;
};

/// Aggregates pair scores; FID is supplied separately since it needs the whole sets.
MetricReport report(const std::vector<PairScore>& pairs, std::optional<FidResult> fid, const std::string& dataset,
                    const std::string& target, const std::string& method);

nlohmann::json to_json(const MetricReport& r);
/// Plain-text table with the columns CLIP, M-CLIP, D-CLIP, FID, PSNR, SSIM.
std::string to_table(const MetricReport& r);

}  // namespace egogen::metrics
