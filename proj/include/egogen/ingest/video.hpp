// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "egogen/core/image.hpp"
#include "egogen/ingest/annotation.hpp"

namespace egogen::ingest {

/// Random-access decoder for one video. Not shared across threads.
class VideoSource {
 public:
  virtual ~VideoSource() = default;
  virtual double fps() const = 0;
  virtual std::int64_t frame_count() const = 0;
  /// DecodeFailure when the frame cannot be produced.
  virtual Image decode(std::int64_t index) = 0;

  double duration() const { return static_cast<double>(frame_count()) / fps(); }
};

/// A directory of numbered PNG frames (000000.png, 000001.png, ...) next to a
/// video.json holding {"fps": <rate>}.
class FrameDirectoryVideo final : public VideoSource {
 public:
  explicit FrameDirectoryVideo(std::filesystem::path dir);
  double fps() const override { return fps_; }
  std::int64_t frame_count() const override { return count_; }
  Image decode(std::int64_t index) override;

 private:
  std::filesystem::path dir_;
  double fps_ = 0;
  std::int64_t count_ = 0;
};

/// Container formats OpenCV's videoio can read (mp4, avi, mkv, ...).
class OpenCvVideo final : public VideoSource {
 public:
  explicit OpenCvVideo(const std::filesystem::path& file);
  ~OpenCvVideo() override;
  double fps() const override { return fps_; }
  std::int64_t frame_count() const override { return count_; }
  Image decode(std::int64_t index) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double fps_ = 0;
  std::int64_t count_ = 0;
};

/// `<videos>/<video_id>/video.json` selects a frame directory; otherwise
/// `<videos>/<video_id>.{mp4,MP4,avi,mkv,mov,webm}`. MissingInput if neither exists.
std::unique_ptr<VideoSource> open_video(const std::filesystem::path& videos_dir, const std::string& video_id);

/// Index of the frame whose timestamp (i / fps) is nearest to t; ties go to the
/// earlier frame. TimestampOutOfRange when t < 0 or t > frame_count / fps.
std::int64_t nearest_frame_index(double t, double fps, std::int64_t frame_count);

/// Decodes the frames nearest to the triplet's three timestamps and writes
/// `<frames_dir>/<key>_{initial,action,final}.png`. Frame paths are stored
/// relative to `relative_to` (the manifest's directory); frame_times records
/// the decoded frames' timestamps.
ActionTriplet extract_frames(ActionTriplet triplet, VideoSource& video, const std::filesystem::path& frames_dir,
                             const std::filesystem::path& relative_to);

}  // namespace egogen::ingest
