// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "egogen/core/frame_kind.hpp"
#include "egogen/core/image.hpp"

namespace egogen::backends {

enum class BackendKind { Vlm, Detector, Inpainter, Embedder };

std::string_view to_string(BackendKind kind);

struct BackendDescriptor {
  BackendKind kind = BackendKind::Vlm;
  std::string endpoint = "mock";  ///< "mock" or an http(s) base URL
  std::string model_tag;
  double timeout = 60.0;  ///< seconds
  int max_concurrency = 1;
  std::string fixture;  ///< fixture file for mocks; ignored by remote clients
  /// Inpainter working resolution; 0 means "use the frame's own size".
  int native_width = 0;
  int native_height = 0;

  bool is_mock() const { return endpoint == "mock"; }
  /// Throws ConfigInvalid when timeout <= 0 or max_concurrency < 1.
  void validate() const;
};

// ---------------------------------------------------------------------------
// vision-language

struct ChatMessage {
  enum class Role { User, Assistant };
  Role role = Role::User;
  std::string text;
  std::optional<Frame> frame;
};

struct ChatRequest {
  /// Action phrase the conversation is about; mocks key fixtures on it.
  std::string action;
  std::vector<ChatMessage> messages;

  /// Number of user turns so far (1-based index of the turn being answered).
  int turn_index() const;
};

class VisionLanguageBackend {
 public:
  virtual ~VisionLanguageBackend() = default;
  /// Requires the first message to carry the frame.
  virtual std::string chat(const ChatRequest& request) = 0;
};

// ---------------------------------------------------------------------------
// detection / segmentation

struct DetectionResult {
  std::string label;
  double score = 0.0;
  BBox bbox;
  std::optional<FrameKind> frame_ref;
  /// Set when the backend box fell outside the image and was clipped.
  bool clamped = false;
  /// Full-frame binary raster, set only inside bbox.
  std::optional<Mask> pixel_mask;
};

class DetectionBackend {
 public:
  virtual ~DetectionBackend() = default;
  /// `labels` must be non-empty. Results are sanitized: scores in [0,1], boxes inside the frame.
  virtual std::vector<DetectionResult> detect_segment(const Frame& frame,
                                                      const std::vector<std::string>& labels) = 0;
};

/// Clips scores to [0,1] and boxes/masks to the frame; drops boxes that become empty.
std::vector<DetectionResult> sanitize_detections(std::vector<DetectionResult> raw, int width, int height);

// ---------------------------------------------------------------------------
// inpainting

struct NativeSize {
  int width = 0;
  int height = 0;
};

class InpaintingBackend {
 public:
  virtual ~InpaintingBackend() = default;
  /// Output has the input's dimensions. Pixels outside the mask may change;
  /// callers re-composite.
  virtual Image inpaint(const Image& frame, const Mask& mask, const std::string& prompt,
                        std::uint64_t seed) = 0;
  /// Resolution the model works at, if it has one.
  virtual std::optional<NativeSize> native_size() const { return std::nullopt; }
};

// ---------------------------------------------------------------------------
// embedding / features

using Vector = std::vector<double>;

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  /// Unit-norm embedding (CLIP role).
  virtual Vector embed(const Frame& frame) = 0;
  /// Raw feature vector for distribution metrics (Inception role).
  virtual Vector features(const Frame& frame) = 0;
};

double cosine(const Vector& a, const Vector& b);
Vector normalized(Vector v);

}  // namespace egogen::backends
