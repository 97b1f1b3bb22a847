// SPDX-License-Identifier: Apache-2.0
#include "egogen/backends/factory.hpp"

#include "egogen/backends/mock.hpp"
#include "egogen/backends/remote.hpp"
#include "egogen/core/error.hpp"

namespace egogen::backends {
namespace {

void require_fixture(const BackendDescriptor& d) {
  if (d.fixture.empty()) {
    throw Error(ErrorCode::ConfigInvalid, std::string("mock ") + std::string(to_string(d.kind)) + " needs a fixture file");
  }
}

}  // namespace

std::unique_ptr<VisionLanguageBackend> make_vlm(const BackendDescriptor& d) {
  d.validate();
  if (!d.is_mock()) return std::make_unique<RemoteVlm>(d);
  require_fixture(d);
  return std::make_unique<FixtureVlm>(FixtureVlm::from_file(d.fixture));
}

std::unique_ptr<DetectionBackend> make_detector(const BackendDescriptor& d) {
  d.validate();
  if (!d.is_mock()) return std::make_unique<RemoteDetector>(d);
  require_fixture(d);
  return std::make_unique<FixtureDetector>(FixtureDetector::from_file(d.fixture));
}

std::unique_ptr<InpaintingBackend> make_inpainter(const BackendDescriptor& d) {
  d.validate();
  if (!d.is_mock()) {
    std::optional<NativeSize> native;
    if (d.native_width > 0 && d.native_height > 0) native = NativeSize{d.native_width, d.native_height};
    return std::make_unique<RemoteInpainter>(d, native);
  }
  if (d.model_tag == "identity") return std::make_unique<IdentityInpainter>();
  return std::make_unique<CheckerboardInpainter>();
}

std::unique_ptr<EmbeddingBackend> make_embedder(const BackendDescriptor& d) {
  d.validate();
  if (!d.is_mock()) return std::make_unique<RemoteEmbedder>(d);
  int dim = 64;
  if (d.model_tag.rfind("dim=", 0) == 0) {
    try {
      dim = std::stoi(d.model_tag.substr(4));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigInvalid, "bad mock embedder tag '" + d.model_tag + "'");
    }
  }
  return std::make_unique<ProjectionEmbedder>(dim);
}

}  // namespace egogen::backends
