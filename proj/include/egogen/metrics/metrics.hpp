// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "egogen/backends/backend.hpp"
#include "egogen/core/image.hpp"

namespace egogen::metrics {

/// How M-CLIP restricts both images to the edited region.
enum class MaskedRegion {
  Crop,         ///< tight bounding rectangle of the mask
  ZeroOutside,  ///< keep full frame, zero pixels outside the mask
};

struct MClipOptions {
  MaskedRegion region = MaskedRegion::Crop;
  /// Empty mask: score the whole frame (flagged) instead of raising EmptyMask.
  bool empty_falls_back = true;
};

struct MClipValue {
  double score = 0;  ///< x100
  bool fell_back = false;
};

/// 100 x cosine of the two embeddings.
double clip_score(const Image& a, const Image& b, backends::EmbeddingBackend& embedder);
MClipValue m_clip(const Image& a, const Image& b, const Mask& mask_union, backends::EmbeddingBackend& embedder,
                  const MClipOptions& options = {});

/// Relative similarity drop in percent, from raw cosines.
double d_clip_from_cosines(double cos_reference, double cos_generated);
double d_clip(const Image& f_in, const Image& reference, const Image& generated,
              backends::EmbeddingBackend& embedder);

/// Peak signal-to-noise ratio in dB over all channels, MAX = 255.
/// Identical images give +infinity.
double psnr(const Image& a, const Image& b);

/// Mean local structural similarity x100; 11x11 Gaussian window (sigma 1.5),
/// valid region only, averaged over channels. Images smaller than the window
/// use the largest odd window that fits.
double ssim(const Image& a, const Image& b);

struct FidResult {
  double value = 0;
  bool regularized = false;
};

constexpr double kFidEpsilon = 1e-6;

/// Frechet distance between Gaussians fit to two feature sets (rows are
/// samples, unbiased covariance). Singular covariances get epsilon added to
/// the diagonal and the result is flagged.
FidResult fid_from_features(const std::vector<backends::Vector>& a, const std::vector<backends::Vector>& b,
                            double epsilon = kFidEpsilon);
FidResult fid(const std::vector<Image>& a, const std::vector<Image>& b, backends::EmbeddingBackend& features,
              double epsilon = kFidEpsilon);

}  // namespace egogen::metrics
