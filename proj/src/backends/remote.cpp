// SPDX-License-Identifier: Apache-2.0
#include "egogen/backends/remote.hpp"

#include <httplib.h>

#include <cmath>

#include "egogen/core/digest.hpp"
#include "egogen/core/error.hpp"
#include "egogen/core/image_io.hpp"

namespace egogen::backends {
namespace {

struct SlotGuard {
  std::counting_semaphore<>& slots;
  explicit SlotGuard(std::counting_semaphore<>& s) : slots(s) { slots.acquire(); }
  ~SlotGuard() { slots.release(); }
};

template <typename T>
T field(const nlohmann::json& reply, const char* name) {
  try {
    return reply.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedBackendReply, std::string("reply field '") + name + "': " + e.what());
  }
}

}  // namespace

HttpTransport::HttpTransport(BackendDescriptor descriptor)
    : descriptor_(std::move(descriptor)), slots_(descriptor_.max_concurrency) {
  descriptor_.validate();
  const auto scheme = descriptor_.endpoint.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::ConfigInvalid, "backend endpoint must be an http(s) URL: " + descriptor_.endpoint);
  }
  const auto path = descriptor_.endpoint.find('/', scheme + 3);
  origin_ = descriptor_.endpoint.substr(0, path);
  prefix_ = path == std::string::npos ? "" : descriptor_.endpoint.substr(path);
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

HttpTransport::~HttpTransport() = default;

nlohmann::json HttpTransport::post(const std::string& route, const nlohmann::json& body) {
  SlotGuard guard(slots_);
  httplib::Client client(origin_);
  const auto seconds = static_cast<time_t>(descriptor_.timeout);
  const auto micros = static_cast<time_t>((descriptor_.timeout - static_cast<double>(seconds)) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);

  nlohmann::json payload = body;
  payload["model"] = descriptor_.model_tag;
  auto res = client.Post(prefix_ + route, payload.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::Read || err == httplib::Error::Write || err == httplib::Error::ConnectionTimeout) {
      throw Error(ErrorCode::Timeout, std::string(to_string(descriptor_.kind)) + " backend timed out (" +
                                          httplib::to_string(err) + ")");
    }
    throw Error(ErrorCode::BackendUnavailable, std::string(to_string(descriptor_.kind)) + " backend at " +
                                                   descriptor_.endpoint + ": " + httplib::to_string(err));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::BackendUnavailable, std::string(to_string(descriptor_.kind)) + " backend returned HTTP " +
                                                   std::to_string(res->status));
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedBackendReply, std::string("reply is not JSON: ") + e.what());
  }
}

std::string encode_image_field(const Image& image) { return base64_encode(encode_png(image)); }

Image decode_image_field(const nlohmann::json& field) {
  if (!field.is_string()) throw Error(ErrorCode::MalformedBackendReply, "image field must be a base64 string");
  const auto bytes = base64_decode(field.get<std::string>());
  try {
    return decode_image(bytes);
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedBackendReply, e.what());
  }
}

std::string RemoteVlm::chat(const ChatRequest& request) {
  if (request.messages.empty() || !request.messages.front().frame) {
    throw Error(ErrorCode::PreconditionViolation, "first chat turn must carry the frame");
  }
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages) {
    nlohmann::json j;
    j["role"] = m.role == ChatMessage::Role::User ? "user" : "assistant";
    j["text"] = m.text;
    j["image"] = m.frame ? nlohmann::json(encode_image_field(m.frame->image)) : nlohmann::json(nullptr);
    messages.push_back(std::move(j));
  }
  const auto reply = http_.post("/chat", {{"action", request.action}, {"messages", messages}});
  return field<std::string>(reply, "reply");
}

std::vector<DetectionResult> RemoteDetector::detect_segment(const Frame& frame,
                                                            const std::vector<std::string>& labels) {
  if (labels.empty()) throw Error(ErrorCode::PreconditionViolation, "detect_segment needs at least one label");
  const auto reply = http_.post("/detect", {{"image", encode_image_field(frame.image)}, {"labels", labels}});
  std::vector<DetectionResult> raw;
  for (const auto& d : field<nlohmann::json>(reply, "detections")) {
    DetectionResult r;
    r.label = field<std::string>(d, "label");
    r.score = field<double>(d, "score");
    const auto box = field<std::vector<double>>(d, "bbox");
    if (box.size() != 4) throw Error(ErrorCode::MalformedBackendReply, "bbox needs 4 numbers");
    r.bbox = {box[0], box[1], box[2], box[3]};
    if (d.contains("mask") && !d.at("mask").is_null()) r.pixel_mask = mask_from_image(decode_image_field(d.at("mask")));
    raw.push_back(std::move(r));
  }
  return sanitize_detections(std::move(raw), frame.image.width(), frame.image.height());
}

Image RemoteInpainter::inpaint(const Image& frame, const Mask& mask, const std::string& prompt,
                               std::uint64_t seed) {
  if (!mask.matches(frame)) throw Error(ErrorCode::DimensionMismatch, "mask does not match frame");
  const auto reply = http_.post("/inpaint", {{"image", encode_image_field(frame)},
                                             {"mask", encode_image_field(mask_to_image(mask))},
                                             {"prompt", prompt},
                                             {"seed", seed}});
  if (!reply.contains("image")) throw Error(ErrorCode::MalformedBackendReply, "inpaint reply lacks 'image'");
  Image out = decode_image_field(reply.at("image"));
  if (out.width() != frame.width() || out.height() != frame.height()) {
    throw Error(ErrorCode::DimensionMismatch, "inpainter returned a different size");
  }
  if (out.channels() != frame.channels()) {
    throw Error(ErrorCode::MalformedBackendReply, "inpainter returned a different channel count");
  }
  return out;
}

Vector RemoteEmbedder::embed(const Frame& frame) {
  const auto reply = http_.post("/embed", {{"image", encode_image_field(frame.image)}});
  return normalized(field<Vector>(reply, "embedding"));
}

Vector RemoteEmbedder::features(const Frame& frame) {
  const auto reply = http_.post("/features", {{"image", encode_image_field(frame.image)}});
  return field<Vector>(reply, "features");
}

}  // namespace egogen::backends
