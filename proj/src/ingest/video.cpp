// SPDX-License-Identifier: Apache-2.0
#include "egogen/ingest/video.hpp"

#include <nlohmann/json.hpp>
#include <opencv2/imgproc.hpp>
#include <opencv2/videoio.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "egogen/core/error.hpp"
#include "egogen/core/frame_kind.hpp"
#include "egogen/core/image_io.hpp"

namespace egogen::ingest {
namespace fs = std::filesystem;

namespace {

std::string frame_name(std::int64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06lld.png", static_cast<long long>(index));
  return buf;
}

}  // namespace

FrameDirectoryVideo::FrameDirectoryVideo(fs::path dir) : dir_(std::move(dir)) {
  std::ifstream in(dir_ / "video.json");
  if (!in) throw Error(ErrorCode::MissingInput, "no video.json in " + dir_.string());
  try {
    fps_ = nlohmann::json::parse(in).at("fps").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::DecodeFailure, dir_.string() + "/video.json: " + e.what());
  }
  if (!(fps_ > 0)) throw Error(ErrorCode::DecodeFailure, "fps must be positive in " + dir_.string());
  while (fs::exists(dir_ / frame_name(count_))) ++count_;
  if (count_ == 0) throw Error(ErrorCode::DecodeFailure, "no frames in " + dir_.string());
}

Image FrameDirectoryVideo::decode(std::int64_t index) {
  if (index < 0 || index >= count_) throw Error(ErrorCode::TimestampOutOfRange, "frame index out of range");
  return read_image(dir_ / frame_name(index));
}

struct OpenCvVideo::Impl {
  cv::VideoCapture capture;
};

OpenCvVideo::OpenCvVideo(const fs::path& file) : impl_(std::make_unique<Impl>()) {
  if (!impl_->capture.open(file.string())) throw Error(ErrorCode::DecodeFailure, "cannot open video " + file.string());
  fps_ = impl_->capture.get(cv::CAP_PROP_FPS);
  count_ = static_cast<std::int64_t>(impl_->capture.get(cv::CAP_PROP_FRAME_COUNT));
  if (!(fps_ > 0) || count_ <= 0) throw Error(ErrorCode::DecodeFailure, "video has no usable frame rate/count: " + file.string());
}

OpenCvVideo::~OpenCvVideo() = default;

Image OpenCvVideo::decode(std::int64_t index) {
  if (index < 0 || index >= count_) throw Error(ErrorCode::TimestampOutOfRange, "frame index out of range");
  impl_->capture.set(cv::CAP_PROP_POS_FRAMES, static_cast<double>(index));
  cv::Mat bgr;
  if (!impl_->capture.read(bgr) || bgr.empty()) {
    throw Error(ErrorCode::DecodeFailure, "cannot decode frame " + std::to_string(index));
  }
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  if (!rgb.isContinuous()) rgb = rgb.clone();
  const std::uint8_t* p = rgb.ptr<std::uint8_t>(0);
  return Image(rgb.cols, rgb.rows, 3, std::vector<std::uint8_t>(p, p + rgb.total() * 3));
}

std::unique_ptr<VideoSource> open_video(const fs::path& videos_dir, const std::string& video_id) {
  const fs::path dir = videos_dir / video_id;
  if (fs::exists(dir / "video.json")) return std::make_unique<FrameDirectoryVideo>(dir);
  for (const char* ext : {".mp4", ".MP4", ".avi", ".mkv", ".mov", ".webm"}) {
    const fs::path file = videos_dir / (video_id + ext);
    if (fs::exists(file)) return std::make_unique<OpenCvVideo>(file);
  }
  throw Error(ErrorCode::MissingInput, "no video for '" + video_id + "' under " + videos_dir.string());
}

std::int64_t nearest_frame_index(double t, double fps, std::int64_t frame_count) {
  if (!(fps > 0) || frame_count <= 0) throw Error(ErrorCode::DecodeFailure, "video has no frames");
  const double duration = static_cast<double>(frame_count) / fps;
  if (!std::isfinite(t) || t < 0 || t > duration) {
    throw Error(ErrorCode::TimestampOutOfRange,
                "t=" + std::to_string(t) + " s outside video of " + std::to_string(duration) + " s");
  }
  const auto lo = static_cast<std::int64_t>(std::floor(t * fps));
  std::int64_t best = lo;
  if (std::abs(static_cast<double>(lo + 1) / fps - t) < std::abs(static_cast<double>(lo) / fps - t)) best = lo + 1;
  return std::clamp<std::int64_t>(best, 0, frame_count - 1);
}

ActionTriplet extract_frames(ActionTriplet triplet, VideoSource& video, const fs::path& frames_dir,
                             const fs::path& relative_to) {
  const double times[3] = {triplet.t_initial, triplet.t_action, triplet.t_final};
  std::array<double, 3> actual{};
  std::string* paths[3] = {&triplet.frame_paths.initial, &triplet.frame_paths.action, &triplet.frame_paths.final};
  // Validate every timestamp before writing anything.
  std::int64_t indices[3];
  for (int k = 0; k < 3; ++k) indices[k] = nearest_frame_index(times[k], video.fps(), video.frame_count());
  for (int k = 0; k < 3; ++k) {
    const Image frame = video.decode(indices[k]);
    const fs::path out = frames_dir / (triplet.key + "_" + std::string(to_string(kAllFrameKinds[k])) + ".png");
    write_png(out, frame);
    *paths[k] = fs::relative(out, relative_to).generic_string();
    actual[k] = static_cast<double>(indices[k]) / video.fps();
  }
  triplet.frame_times = actual;
  return triplet;
}

}  // namespace egogen::ingest
