// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egogen/backends/backend.hpp"

namespace egogen::backends {

/// Replies from a fixture table keyed by (action, turn index).
///
/// Fixture layout:
///   {"strict": true,
///    "replies": {"cut tomato": ["turn 1 reply", "turn 2 reply", ...]},
///    "default": ["turn 1 reply", ...]}
///
/// Action keys are matched case-insensitively after trimming. In strict mode an
/// unknown (action, turn) raises MalformedFixtureKey; otherwise the "default"
/// list is consulted and an empty reply returned when it has no entry.
class FixtureVlm final : public VisionLanguageBackend {
 public:
  explicit FixtureVlm(const nlohmann::json& fixture);
  static FixtureVlm from_file(const std::filesystem::path& path);

  std::string chat(const ChatRequest& request) override;

 private:
  bool strict_ = true;
  std::map<std::string, std::vector<std::string>> replies_;
  std::vector<std::string> defaults_;
};

/// Per-frame detection fixture.
///
///   {"frames": {"<frame id>": [{"label": "tomato", "score": 0.9,
///                               "bbox": [10, 10, 50, 50], "mask": "ellipse"}],
///               "*": [...]}}
///
/// Only entries whose label was requested are returned. "mask" may be "box" or
/// "ellipse" (inscribed in the box); without it no pixel mask is produced.
/// The "*" entry applies to frames that have no entry of their own.
class FixtureDetector final : public DetectionBackend {
 public:
  explicit FixtureDetector(const nlohmann::json& fixture);
  static FixtureDetector from_file(const std::filesystem::path& path);

  std::vector<DetectionResult> detect_segment(const Frame& frame,
                                              const std::vector<std::string>& labels) override;

 private:
  struct Entry {
    std::string label;
    double score;
    BBox bbox;
    std::string mask_shape;
  };
  std::map<std::string, std::vector<Entry>> frames_;
};

/// Returns its input unchanged.
class IdentityInpainter final : public InpaintingBackend {
 public:
  Image inpaint(const Image& frame, const Mask& mask, const std::string& prompt,
                std::uint64_t seed) override;
};

/// Paints a seed-phased checkerboard over the masked region; every masked pixel
/// is guaranteed to differ from its input value. Pixels outside the mask are
/// deliberately perturbed too, so callers must re-composite.
class CheckerboardInpainter final : public InpaintingBackend {
 public:
  explicit CheckerboardInpainter(int cell = 8) : cell_(cell) {}
  Image inpaint(const Image& frame, const Mask& mask, const std::string& prompt,
                std::uint64_t seed) override;

 private:
  int cell_;
};

/// Locality-sensitive embedding: box-downsampled pixels mapped to [-1, 1],
/// projected with a seeded pseudo-random matrix. `embed` normalizes the
/// projection; `features` returns it raw.
class ProjectionEmbedder final : public EmbeddingBackend {
 public:
  explicit ProjectionEmbedder(int dimension = 64, int grid = 8, std::uint64_t seed = 0);

  Vector embed(const Frame& frame) override;
  Vector features(const Frame& frame) override;

  int dimension() const noexcept { return dimension_; }

 private:
  std::vector<double> pooled(const Image& image) const;

  int dimension_;
  int grid_;
  std::vector<double> projection_;  // dimension_ x (grid_ * grid_ * 3), row-major
};

}  // namespace egogen::backends
