// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace egogen {

/// 8-bit interleaved raster with 1 (gray) or 3 (RGB) channels.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, std::uint8_t fill = 0);
  Image(int width, int height, int channels, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return pixels_.empty(); }
  bool same_shape(const Image& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }

  std::uint8_t& at(int x, int y, int c = 0) {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Integer pixel rectangle, half-open: [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const noexcept { return x1 - x0; }
  int height() const noexcept { return y1 - y0; }
  long area() const noexcept { return x1 > x0 && y1 > y0 ? static_cast<long>(width()) * height() : 0; }
  bool empty() const noexcept { return area() == 0; }
  bool contains(int x, int y) const noexcept { return x >= x0 && x < x1 && y >= y0 && y < y1; }

  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

/// Detector-space box (x_min, y_min, x_max, y_max) in pixel coordinates.
struct BBox {
  double x_min = 0;
  double y_min = 0;
  double x_max = 0;
  double y_max = 0;

  bool valid() const noexcept { return x_min < x_max && y_min < y_max; }
  bool within(int width, int height) const noexcept {
    return x_min >= 0 && y_min >= 0 && x_max <= width && y_max <= height;
  }
  double center_x() const noexcept { return 0.5 * (x_min + x_max); }
  double center_y() const noexcept { return 0.5 * (y_min + y_max); }

  /// Box clipped to [0,width] x [0,height].
  BBox clamped(int width, int height) const noexcept;

  /// Pixels whose area intersects the box (floor/ceil), clipped to the image.
  PixelRect to_pixels(int width, int height) const noexcept;

  BBox translated(double dx, double dy) const noexcept {
    return {x_min + dx, y_min + dy, x_max + dx, y_max + dy};
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Binary raster; stored values are 0 or 1.
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height, bool value = false);

  static Mask full(int width, int height) { return Mask(width, height, true); }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool same_shape(const Mask& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool matches(const Image& image) const noexcept {
    return width_ == image.width() && height_ == image.height();
  }

  bool get(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool value = true) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
  }

  long count() const noexcept;
  bool none() const noexcept { return count() == 0; }
  bool all() const noexcept;

  void fill(const PixelRect& rect);
  Mask& operator|=(const Mask& other);
  Mask operator&(const Mask& other) const;

  /// Tight bounding rectangle of the set pixels; nullopt when empty.
  std::optional<PixelRect> bounds() const;

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// An image plus the identifier backends may use to look it up (file stem).
struct Frame {
  std::string id;
  Image image;
};

Image crop(const Image& image, const PixelRect& rect);

/// Pixels from `edited` where the mask is set, `base` elsewhere.
Image composite(const Image& base, const Image& edited, const Mask& mask);

Mask rect_mask(int width, int height, const PixelRect& rect);

}  // namespace egogen
