// SPDX-License-Identifier: Apache-2.0
#include "egogen/backends/backend.hpp"

#include <algorithm>
#include <cmath>

#include "egogen/core/error.hpp"

namespace egogen::backends {

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::Vlm: return "vlm";
    case BackendKind::Detector: return "detector";
    case BackendKind::Inpainter: return "inpainter";
    case BackendKind::Embedder: return "embedder";
  }
  return "vlm";
}

void BackendDescriptor::validate() const {
  if (!(timeout > 0)) {
    throw Error(ErrorCode::ConfigInvalid, std::string(to_string(kind)) + " backend timeout must be > 0");
  }
  if (max_concurrency < 1) {
    throw Error(ErrorCode::ConfigInvalid,
                std::string(to_string(kind)) + " backend max_concurrency must be >= 1");
  }
  if (endpoint.empty()) {
    throw Error(ErrorCode::ConfigInvalid, std::string(to_string(kind)) + " backend endpoint is empty");
  }
}

int ChatRequest::turn_index() const {
  return static_cast<int>(std::count_if(messages.begin(), messages.end(), [](const ChatMessage& m) {
    return m.role == ChatMessage::Role::User;
  }));
}

std::vector<DetectionResult> sanitize_detections(std::vector<DetectionResult> raw, int width, int height) {
  std::vector<DetectionResult> out;
  out.reserve(raw.size());
  for (auto& d : raw) {
    if (!std::isfinite(d.score)) continue;
    d.score = std::clamp(d.score, 0.0, 1.0);
    const BBox clipped = d.bbox.clamped(width, height);
    if (!(clipped == d.bbox)) {
      d.bbox = clipped;
      d.clamped = true;
    }
    if (!d.bbox.valid()) continue;
    if (d.pixel_mask) {
      if (d.pixel_mask->width() != width || d.pixel_mask->height() != height) {
        d.pixel_mask.reset();
      } else {
        const Mask inside = *d.pixel_mask & rect_mask(width, height, d.bbox.to_pixels(width, height));
        d.pixel_mask = inside;
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

double cosine(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "embedding dimensions differ");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / std::sqrt(na * nb);
}

Vector normalized(Vector v) {
  double n = 0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  if (n == 0) throw Error(ErrorCode::Internal, "cannot normalize a zero vector");
  for (double& x : v) x /= n;
  return v;
}

}  // namespace egogen::backends
