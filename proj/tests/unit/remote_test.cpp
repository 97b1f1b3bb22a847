// SPDX-License-Identifier: Apache-2.0
// Remote clients against an in-process HTTP server.
#include <gtest/gtest.h>

#include <httplib.h>

#include <chrono>
#include <mutex>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "egogen/backends/remote.hpp"
#include "egogen/core/error.hpp"
#include "egogen/core/image_io.hpp"
#include "support.hpp"

using namespace egogen;
using namespace egogen::backends;
using nlohmann::json;

namespace {

class FakeServer {
 public:
  FakeServer() {
    server_.Post(R"(/v1/(\w+))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string route = req.matches[1];
      json body;
      {
        std::lock_guard lock(mutex_);
        body = json::parse(req.body);
        last_[route] = body;
      }
      if (mode_ == "error") {
        res.status = 500;
        return;
      }
      if (mode_ == "garbage") {
        res.set_content("not json", "text/plain");
        return;
      }
      if (mode_ == "slow") std::this_thread::sleep_for(std::chrono::milliseconds(800));
      json reply;
      if (route == "chat") {
        reply = {{"reply", "turns=" + std::to_string(body.at("messages").size())}};
      } else if (route == "detect") {
        const Image img = decode_image_field(body.at("image"));
        Mask m(img.width(), img.height());
        m.fill({0, 0, 4, 4});
        reply = {{"detections",
                  {{{"label", body.at("labels")[0]}, {"score", 0.8}, {"bbox", {0, 0, 4, 4}},
                    {"mask", encode_image_field(mask_to_image(m))}},
                   {{"label", "edge"}, {"score", 0.5}, {"bbox", {-3, 2, 6, 5}}}}}};
      } else if (route == "inpaint") {
        Image img = decode_image_field(body.at("image"));
        const Mask mask = mask_from_image(decode_image_field(body.at("mask")));
        for (int y = 0; y < img.height(); ++y) {
          for (int x = 0; x < img.width(); ++x) {
            if (mask.get(x, y)) {
              for (int c = 0; c < img.channels(); ++c) img.at(x, y, c) = 7;
            }
          }
        }
        reply = {{"image", encode_image_field(img)}};
      } else if (route == "embed") {
        reply = {{"embedding", {3.0, 4.0}}};
      } else if (route == "features") {
        reply = {{"features", {1.5, -2.0, 0.25}}};
      }
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }

  BackendDescriptor descriptor(BackendKind kind, double timeout = 5.0) const {
    BackendDescriptor d;
    d.kind = kind;
    d.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1/";
    d.model_tag = "test-model";
    d.timeout = timeout;
    return d;
  }
  json last(const std::string& route) {
    std::lock_guard lock(mutex_);
    return last_[route];
  }
  void set_mode(std::string mode) { mode_ = std::move(mode); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mutex_;
  std::map<std::string, json> last_;
  std::string mode_ = "ok";
};

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

Image sample(int w = 10, int h = 8) {
  std::mt19937_64 rng(9);
  return egogen::testing::random_image(w, h, 3, rng);
}

}  // namespace

TEST(Remote, ChatSendsAllTurnsAndModelTag) {
  FakeServer server;
  RemoteVlm vlm(server.descriptor(BackendKind::Vlm));
  ChatRequest req;
  req.action = "cut tomato";
  req.messages.push_back({ChatMessage::Role::User, "list", Frame{"f", sample()}});
  req.messages.push_back({ChatMessage::Role::Assistant, "tomato", std::nullopt});
  req.messages.push_back({ChatMessage::Role::User, "categorize", std::nullopt});
  EXPECT_EQ(vlm.chat(req), "turns=3");
  const json body = server.last("chat");
  EXPECT_EQ(body.at("model"), "test-model");
  EXPECT_EQ(body.at("action"), "cut tomato");
  EXPECT_EQ(body.at("messages")[1].at("role"), "assistant");
  EXPECT_TRUE(body.at("messages")[1].at("image").is_null());
  EXPECT_EQ(decode_image_field(body.at("messages")[0].at("image")), sample());
}

TEST(Remote, DetectDecodesMasksAndClampsBoxes) {
  FakeServer server;
  RemoteDetector det(server.descriptor(BackendKind::Detector));
  const auto found = det.detect_segment(Frame{"f", sample()}, {"tomato"});
  ASSERT_EQ(found.size(), 2u);
  EXPECT_EQ(found[0].label, "tomato");
  ASSERT_TRUE(found[0].pixel_mask);
  EXPECT_EQ(found[0].pixel_mask->count(), 16);
  EXPECT_TRUE(found[1].clamped);
  EXPECT_EQ(found[1].bbox, (BBox{0, 2, 6, 5}));
  EXPECT_EQ(server.last("detect").at("labels"), json::array({"tomato"}));
}

TEST(Remote, InpaintRoundTripsImageAndMask) {
  FakeServer server;
  RemoteInpainter inp(server.descriptor(BackendKind::Inpainter));
  const Image img = sample();
  const Mask mask = rect_mask(10, 8, {2, 2, 5, 6});
  const Image out = inp.inpaint(img, mask, "a hand cutting a tomato", 42);
  EXPECT_EQ(out, composite(img, egogen::testing::constant_image(10, 8, 3, 7), mask));
  const json body = server.last("inpaint");
  EXPECT_EQ(body.at("seed"), 42);
  EXPECT_EQ(body.at("prompt"), "a hand cutting a tomato");
}

TEST(Remote, EmbedIsNormalizedAndFeaturesAreRaw) {
  FakeServer server;
  RemoteEmbedder emb(server.descriptor(BackendKind::Embedder));
  const auto e = emb.embed(Frame{"f", sample()});
  ASSERT_EQ(e.size(), 2u);
  EXPECT_NEAR(e[0], 0.6, 1e-12);
  EXPECT_NEAR(e[1], 0.8, 1e-12);
  EXPECT_EQ(emb.features(Frame{"f", sample()}), (Vector{1.5, -2.0, 0.25}));
}

TEST(Remote, ServerErrorIsBackendUnavailable) {
  FakeServer server;
  server.set_mode("error");
  RemoteEmbedder emb(server.descriptor(BackendKind::Embedder));
  EXPECT_EQ(code_of([&] { emb.embed(Frame{"f", sample()}); }), ErrorCode::BackendUnavailable);
}

TEST(Remote, NonJsonReplyIsMalformed) {
  FakeServer server;
  server.set_mode("garbage");
  RemoteEmbedder emb(server.descriptor(BackendKind::Embedder));
  EXPECT_EQ(code_of([&] { emb.embed(Frame{"f", sample()}); }), ErrorCode::MalformedBackendReply);
}

TEST(Remote, SlowReplyTimesOut) {
  FakeServer server;
  server.set_mode("slow");
  RemoteEmbedder emb(server.descriptor(BackendKind::Embedder, 0.2));
  EXPECT_EQ(code_of([&] { emb.embed(Frame{"f", sample()}); }), ErrorCode::Timeout);
}

TEST(Remote, UnreachableEndpointIsBackendUnavailable) {
  BackendDescriptor d;
  d.kind = BackendKind::Embedder;
  d.endpoint = "http://127.0.0.1:1";
  d.timeout = 2;
  RemoteEmbedder emb(d);
  const ErrorCode code = code_of([&] { emb.embed(Frame{"f", sample()}); });
  EXPECT_TRUE(code == ErrorCode::BackendUnavailable || code == ErrorCode::Timeout);
  EXPECT_TRUE(is_backend_error(code));
}

TEST(Remote, EndpointMustBeUrl) {
  BackendDescriptor d;
  d.endpoint = "localhost:8000";
  EXPECT_EQ(code_of([&] { RemoteVlm vlm(d); }), ErrorCode::ConfigInvalid);
}
