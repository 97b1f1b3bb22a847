// SPDX-License-Identifier: Apache-2.0
#include "egogen/backends/mock.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "egogen/core/digest.hpp"
#include "egogen/core/error.hpp"

namespace egogen::backends {
namespace {

std::string normalize_key(std::string_view text) {
  std::string out;
  for (char c : text) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto first = out.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = out.find_last_not_of(" \t\r\n");
  return out.substr(first, last - first + 1);
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingInput, "cannot open fixture " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, "fixture " + path.string() + ": " + e.what());
  }
}

}  // namespace

// --- FixtureVlm -------------------------------------------------------------

FixtureVlm::FixtureVlm(const nlohmann::json& fixture) {
  strict_ = fixture.value("strict", true);
  if (fixture.contains("replies")) {
    for (const auto& [action, turns] : fixture.at("replies").items()) {
      replies_[normalize_key(action)] = turns.get<std::vector<std::string>>();
    }
  }
  if (fixture.contains("default")) defaults_ = fixture.at("default").get<std::vector<std::string>>();
}

FixtureVlm FixtureVlm::from_file(const std::filesystem::path& path) { return FixtureVlm(load_json(path)); }

std::string FixtureVlm::chat(const ChatRequest& request) {
  if (request.messages.empty() || !request.messages.front().frame) {
    throw Error(ErrorCode::PreconditionViolation, "first chat turn must carry the frame");
  }
  const int turn = request.turn_index();
  const auto it = replies_.find(normalize_key(request.action));
  if (it != replies_.end() && turn >= 1 && static_cast<std::size_t>(turn) <= it->second.size()) {
    return it->second[turn - 1];
  }
  if (strict_) {
    throw Error(ErrorCode::MalformedFixtureKey,
                "no fixture reply for ('" + request.action + "', turn " + std::to_string(turn) + ")");
  }
  if (turn >= 1 && static_cast<std::size_t>(turn) <= defaults_.size()) return defaults_[turn - 1];
  return {};
}

// --- FixtureDetector --------------------------------------------------------

FixtureDetector::FixtureDetector(const nlohmann::json& fixture) {
  if (!fixture.contains("frames")) return;
  for (const auto& [frame_id, entries] : fixture.at("frames").items()) {
    auto& list = frames_[frame_id];
    for (const auto& e : entries) {
      const auto box = e.at("bbox").get<std::vector<double>>();
      if (box.size() != 4) throw Error(ErrorCode::ConfigInvalid, "fixture bbox needs 4 numbers");
      list.push_back({normalize_key(e.at("label").get<std::string>()), e.at("score").get<double>(),
                      BBox{box[0], box[1], box[2], box[3]}, e.value("mask", std::string{})});
    }
  }
}

FixtureDetector FixtureDetector::from_file(const std::filesystem::path& path) {
  return FixtureDetector(load_json(path));
}

std::vector<DetectionResult> FixtureDetector::detect_segment(const Frame& frame,
                                                             const std::vector<std::string>& labels) {
  if (labels.empty()) throw Error(ErrorCode::PreconditionViolation, "detect_segment needs at least one label");
  auto it = frames_.find(frame.id);
  if (it == frames_.end()) it = frames_.find("*");
  if (it == frames_.end()) return {};

  std::vector<std::string> wanted;
  for (const auto& l : labels) wanted.push_back(normalize_key(l));

  const int w = frame.image.width(), h = frame.image.height();
  std::vector<DetectionResult> raw;
  for (const auto& e : it->second) {
    if (std::find(wanted.begin(), wanted.end(), e.label) == wanted.end()) continue;
    DetectionResult d;
    d.label = e.label;
    d.score = e.score;
    d.bbox = e.bbox;
    if (!e.mask_shape.empty()) {
      const PixelRect r = e.bbox.to_pixels(w, h);
      Mask m(w, h);
      if (e.mask_shape == "box") {
        m.fill(r);
      } else if (e.mask_shape == "ellipse") {
        const double cx = e.bbox.center_x(), cy = e.bbox.center_y();
        const double rx = 0.5 * (e.bbox.x_max - e.bbox.x_min), ry = 0.5 * (e.bbox.y_max - e.bbox.y_min);
        for (int y = r.y0; y < r.y1; ++y) {
          for (int x = r.x0; x < r.x1; ++x) {
            const double nx = (x + 0.5 - cx) / rx, ny = (y + 0.5 - cy) / ry;
            if (nx * nx + ny * ny <= 1.0) m.set(x, y);
          }
        }
      } else {
        throw Error(ErrorCode::ConfigInvalid, "unknown fixture mask shape '" + e.mask_shape + "'");
      }
      d.pixel_mask = std::move(m);
    }
    raw.push_back(std::move(d));
  }
  return sanitize_detections(std::move(raw), w, h);
}

// --- inpainters ---------------------------------------------------------------

Image IdentityInpainter::inpaint(const Image& frame, const Mask& mask, const std::string&, std::uint64_t) {
  if (!mask.matches(frame)) throw Error(ErrorCode::DimensionMismatch, "mask does not match frame");
  return frame;
}

Image CheckerboardInpainter::inpaint(const Image& frame, const Mask& mask, const std::string&,
                                     std::uint64_t seed) {
  if (!mask.matches(frame)) throw Error(ErrorCode::DimensionMismatch, "mask does not match frame");
  const std::uint64_t h = mix64(seed);
  const int phase = static_cast<int>(h & 1u);
  const std::uint8_t light = static_cast<std::uint8_t>(160 + ((h >> 8) % 64));
  const std::uint8_t dark = static_cast<std::uint8_t>(16 + ((h >> 16) % 64));
  Image out = frame;
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      const bool on = ((x / cell_ + y / cell_ + phase) & 1) != 0;
      for (int c = 0; c < frame.channels(); ++c) {
        std::uint8_t v = on ? light : dark;
        if (v == frame.at(x, y, c)) v = static_cast<std::uint8_t>(v + 1);
        if (!mask.get(x, y)) v = static_cast<std::uint8_t>(frame.at(x, y, c) ^ 0x01);
        out.at(x, y, c) = v;
      }
    }
  }
  return out;
}

// --- ProjectionEmbedder -------------------------------------------------------

ProjectionEmbedder::ProjectionEmbedder(int dimension, int grid, std::uint64_t seed)
    : dimension_(dimension), grid_(grid) {
  if (dimension < 1 || grid < 1) throw Error(ErrorCode::ConfigInvalid, "embedder dimension and grid must be >= 1");
  const std::size_t inputs = static_cast<std::size_t>(grid) * grid * 3;
  projection_.resize(static_cast<std::size_t>(dimension) * inputs);
  for (std::size_t i = 0; i < projection_.size(); ++i) {
    const std::uint64_t bits = mix64(seed * 0x2545f4914f6cdd1dull + i);
    projection_[i] = static_cast<double>(bits >> 11) * 0x1.0p-52 - 1.0;  // uniform in [-1, 1)
  }
}

std::vector<double> ProjectionEmbedder::pooled(const Image& image) const {
  if (image.empty()) throw Error(ErrorCode::DecodeFailure, "cannot embed an empty image");
  std::vector<double> cells(static_cast<std::size_t>(grid_) * grid_ * 3, 0.0);
  const int w = image.width(), h = image.height();
  for (int gy = 0; gy < grid_; ++gy) {
    const int y0 = gy * h / grid_;
    const int y1 = std::max(y0 + 1, (gy + 1) * h / grid_);
    for (int gx = 0; gx < grid_; ++gx) {
      const int x0 = gx * w / grid_;
      const int x1 = std::max(x0 + 1, (gx + 1) * w / grid_);
      for (int c = 0; c < 3; ++c) {
        const int src_c = image.channels() == 3 ? c : 0;
        double sum = 0;
        for (int y = y0; y < std::min(y1, h); ++y) {
          for (int x = x0; x < std::min(x1, w); ++x) sum += image.at(x, y, src_c);
        }
        const double n = static_cast<double>((std::min(y1, h) - y0) * (std::min(x1, w) - x0));
        cells[(static_cast<std::size_t>(gy) * grid_ + gx) * 3 + c] = sum / n / 127.5 - 1.0;
      }
    }
  }
  return cells;
}

Vector ProjectionEmbedder::features(const Frame& frame) {
  const auto cells = pooled(frame.image);
  Vector out(static_cast<std::size_t>(dimension_), 0.0);
  for (int d = 0; d < dimension_; ++d) {
    const double* row = projection_.data() + static_cast<std::size_t>(d) * cells.size();
    double acc = 0;
    for (std::size_t k = 0; k < cells.size(); ++k) acc += row[k] * cells[k];
    out[d] = acc;
  }
  return out;
}

Vector ProjectionEmbedder::embed(const Frame& frame) { return normalized(features(frame)); }

}  // namespace egogen::backends
