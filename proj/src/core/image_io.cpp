// SPDX-License-Identifier: Apache-2.0
#include "egogen/core/image_io.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "egogen/core/error.hpp"

namespace egogen {
namespace {

const std::vector<int> kPngParams = {cv::IMWRITE_PNG_COMPRESSION, 6};

cv::Mat to_mat(const Image& image) {
  cv::Mat view(image.height(), image.width(), image.channels() == 3 ? CV_8UC3 : CV_8UC1,
               const_cast<std::uint8_t*>(image.pixels().data()));
  cv::Mat out;
  if (image.channels() == 3) {
    cv::cvtColor(view, out, cv::COLOR_RGB2BGR);
  } else {
    out = view.clone();
  }
  return out;
}

Image from_mat(const cv::Mat& decoded) {
  cv::Mat rgb;
  switch (decoded.channels()) {
    case 1: rgb = decoded; break;
    case 3: cv::cvtColor(decoded, rgb, cv::COLOR_BGR2RGB); break;
    case 4: cv::cvtColor(decoded, rgb, cv::COLOR_BGRA2RGB); break;
    default: throw Error(ErrorCode::DecodeFailure, "unsupported channel count");
  }
  if (rgb.depth() != CV_8U) throw Error(ErrorCode::DecodeFailure, "only 8-bit images are supported");
  if (!rgb.isContinuous()) rgb = rgb.clone();
  const std::uint8_t* begin = rgb.ptr<std::uint8_t>(0);
  std::vector<std::uint8_t> pixels(begin, begin + rgb.total() * rgb.channels());
  return Image(rgb.cols, rgb.rows, rgb.channels(), std::move(pixels));
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
  cv::Mat decoded = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (decoded.empty()) throw Error(ErrorCode::DecodeFailure, "cannot decode image " + path.string());
  return from_mat(decoded);
}

void write_png(const std::filesystem::path& path, const Image& image) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), to_mat(image), kPngParams)) {
    throw Error(ErrorCode::Internal, "cannot write " + path.string());
  }
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  std::vector<std::uint8_t> bytes;
  if (!cv::imencode(".png", to_mat(image), bytes, kPngParams)) {
    throw Error(ErrorCode::Internal, "PNG encoding failed");
  }
  return bytes;
}

Image decode_image(std::span<const std::uint8_t> bytes) {
  cv::Mat buffer(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat decoded = cv::imdecode(buffer, cv::IMREAD_UNCHANGED);
  if (decoded.empty()) throw Error(ErrorCode::DecodeFailure, "cannot decode image bytes");
  return from_mat(decoded);
}

Image mask_to_image(const Mask& mask) {
  Image out(mask.width(), mask.height(), 1);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) out.at(x, y) = mask.get(x, y) ? 255 : 0;
  }
  return out;
}

Mask mask_from_image(const Image& image) {
  Mask out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      bool set = false;
      for (int c = 0; c < image.channels(); ++c) set = set || image.at(x, y, c) != 0;
      out.set(x, y, set);
    }
  }
  return out;
}

void write_mask_png(const std::filesystem::path& path, const Mask& mask) {
  write_png(path, mask_to_image(mask));
}

Mask read_mask_png(const std::filesystem::path& path) { return mask_from_image(read_image(path)); }

Image resize(const Image& image, int width, int height) {
  if (image.width() == width && image.height() == height) return image;
  cv::Mat src(image.height(), image.width(), image.channels() == 3 ? CV_8UC3 : CV_8UC1,
              const_cast<std::uint8_t*>(image.pixels().data()));
  cv::Mat dst;
  const bool shrinking = width < image.width() || height < image.height();
  cv::resize(src, dst, cv::Size(width, height), 0, 0, shrinking ? cv::INTER_AREA : cv::INTER_LINEAR);
  if (!dst.isContinuous()) dst = dst.clone();
  const std::uint8_t* begin = dst.ptr<std::uint8_t>(0);
  return Image(width, height, image.channels(),
               std::vector<std::uint8_t>(begin, begin + dst.total() * dst.channels()));
}

Mask resize_nearest(const Mask& mask, int width, int height) {
  if (mask.width() == width && mask.height() == height) return mask;
  Mask out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(mask.height() - 1, static_cast<int>((y + 0.5) * mask.height() / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(mask.width() - 1, static_cast<int>((x + 0.5) * mask.width() / width));
      out.set(x, y, mask.get(sx, sy));
    }
  }
  return out;
}

}  // namespace egogen
