// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "egogen/backends/backend.hpp"

namespace egogen::backends {

/// Mock backends when descriptor.endpoint == "mock", HTTP clients otherwise.
/// Mock VLM/detector require descriptor.fixture. The mock inpainter is the
/// checkerboard unless model_tag == "identity"; the mock embedder reads
/// "dim=<n>" from model_tag (default 64).
std::unique_ptr<VisionLanguageBackend> make_vlm(const BackendDescriptor& d);
std::unique_ptr<DetectionBackend> make_detector(const BackendDescriptor& d);
std::unique_ptr<InpaintingBackend> make_inpainter(const BackendDescriptor& d);
std::unique_ptr<EmbeddingBackend> make_embedder(const BackendDescriptor& d);

}  // namespace egogen::backends
