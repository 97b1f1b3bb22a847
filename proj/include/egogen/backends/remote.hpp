// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <semaphore>
#include <string>

#include <nlohmann/json.hpp>

#include "egogen/backends/backend.hpp"

namespace egogen::backends {

/// JSON-over-HTTP transport shared by the remote clients. Images travel as
/// base64 PNG; see docs/protocol.md for the per-kind request/reply fields.
class HttpTransport {
 public:
  explicit HttpTransport(BackendDescriptor descriptor);
  ~HttpTransport();
  HttpTransport(const HttpTransport&) = delete;
  HttpTransport& operator=(const HttpTransport&) = delete;

  /// POST `body` to `<endpoint><route>`; at most max_concurrency calls in flight.
  nlohmann::json post(const std::string& route, const nlohmann::json& body);

  const BackendDescriptor& descriptor() const noexcept { return descriptor_; }

 private:
  BackendDescriptor descriptor_;
  std::string origin_;
  std::string prefix_;
  std::counting_semaphore<> slots_;
};

std::string encode_image_field(const Image& image);
Image decode_image_field(const nlohmann::json& field);

class RemoteVlm final : public VisionLanguageBackend {
 public:
  explicit RemoteVlm(BackendDescriptor descriptor) : http_(std::move(descriptor)) {}
  std::string chat(const ChatRequest& request) override;

 private:
  HttpTransport http_;
};

class RemoteDetector final : public DetectionBackend {
 public:
  explicit RemoteDetector(BackendDescriptor descriptor) : http_(std::move(descriptor)) {}
  std::vector<DetectionResult> detect_segment(const Frame& frame,
                                              const std::vector<std::string>& labels) override;

 private:
  HttpTransport http_;
};

class RemoteInpainter final : public InpaintingBackend {
 public:
  RemoteInpainter(BackendDescriptor descriptor, std::optional<NativeSize> native = std::nullopt)
      : http_(std::move(descriptor)), native_(native) {}
  Image inpaint(const Image& frame, const Mask& mask, const std::string& prompt,
                std::uint64_t seed) override;
  std::optional<NativeSize> native_size() const override { return native_; }

 private:
  HttpTransport http_;
  std::optional<NativeSize> native_;
};

class RemoteEmbedder final : public EmbeddingBackend {
 public:
  explicit RemoteEmbedder(BackendDescriptor descriptor) : http_(std::move(descriptor)) {}
  Vector embed(const Frame& frame) override;
  Vector features(const Frame& frame) override;

 private:
  HttpTransport http_;
};

}  // namespace egogen::backends
