// SPDX-License-Identifier: Apache-2.0
#include "egogen/core/image.hpp"

#include <algorithm>
#include <cmath>

#include "egogen/core/error.hpp"

namespace egogen {

Image::Image(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels),
      pixels_(static_cast<std::size_t>(width) * height * channels, fill) {
  if (width < 0 || height < 0 || (channels != 1 && channels != 3)) {
    throw Error(ErrorCode::PreconditionViolation, "invalid image shape");
  }
}

Image::Image(int width, int height, int channels, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), channels_(channels), pixels_(std::move(pixels)) {
  if (width < 0 || height < 0 || (channels != 1 && channels != 3) ||
      pixels_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error(ErrorCode::PreconditionViolation, "pixel buffer does not match image shape");
  }
}

BBox BBox::clamped(int width, int height) const noexcept {
  auto clip = [](double v, double hi) { return std::clamp(v, 0.0, hi); };
  return {clip(x_min, width), clip(y_min, height), clip(x_max, width), clip(y_max, height)};
}

PixelRect BBox::to_pixels(int width, int height) const noexcept {
  PixelRect r;
  r.x0 = std::clamp(static_cast<int>(std::floor(x_min)), 0, width);
  r.y0 = std::clamp(static_cast<int>(std::floor(y_min)), 0, height);
  r.x1 = std::clamp(static_cast<int>(std::ceil(x_max)), 0, width);
  r.y1 = std::clamp(static_cast<int>(std::ceil(y_max)), 0, height);
  if (r.x1 < r.x0) r.x1 = r.x0;
  if (r.y1 < r.y0) r.y1 = r.y0;
  return r;
}

Mask::Mask(int width, int height, bool value)
    : width_(width), height_(height),
      bits_(static_cast<std::size_t>(width) * height, value ? 1 : 0) {}

long Mask::count() const noexcept {
  return static_cast<long>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool Mask::all() const noexcept {
  return !bits_.empty() && std::all_of(bits_.begin(), bits_.end(), [](auto b) { return b != 0; });
}

void Mask::fill(const PixelRect& rect) {
  const int x0 = std::max(rect.x0, 0), x1 = std::min(rect.x1, width_);
  const int y0 = std::max(rect.y0, 0), y1 = std::min(rect.y1, height_);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) set(x, y);
  }
}

Mask& Mask::operator|=(const Mask& other) {
  if (!same_shape(other)) throw Error(ErrorCode::DimensionMismatch, "mask union of different shapes");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
  return *this;
}

Mask Mask::operator&(const Mask& other) const {
  if (!same_shape(other)) throw Error(ErrorCode::DimensionMismatch, "mask intersection of different shapes");
  Mask out(width_, height_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & other.bits_[i];
  return out;
}

std::optional<PixelRect> Mask::bounds() const {
  PixelRect r{width_, height_, 0, 0};
  bool any = false;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (!get(x, y)) continue;
      any = true;
      r.x0 = std::min(r.x0, x);
      r.y0 = std::min(r.y0, y);
      r.x1 = std::max(r.x1, x + 1);
      r.y1 = std::max(r.y1, y + 1);
    }
  }
  if (!any) return std::nullopt;
  return r;
}

Image crop(const Image& image, const PixelRect& rect) {
  if (rect.empty() || rect.x0 < 0 || rect.y0 < 0 || rect.x1 > image.width() || rect.y1 > image.height()) {
    throw Error(ErrorCode::PreconditionViolation, "crop rectangle outside image");
  }
  Image out(rect.width(), rect.height(), image.channels());
  for (int y = 0; y < rect.height(); ++y) {
    for (int x = 0; x < rect.width(); ++x) {
      for (int c = 0; c < image.channels(); ++c) out.at(x, y, c) = image.at(rect.x0 + x, rect.y0 + y, c);
    }
  }
  return out;
}

Image composite(const Image& base, const Image& edited, const Mask& mask) {
  if (!base.same_shape(edited) || !mask.matches(base)) {
    throw Error(ErrorCode::DimensionMismatch, "composite inputs differ in shape");
  }
  Image out = base;
  for (int y = 0; y < base.height(); ++y) {
    for (int x = 0; x < base.width(); ++x) {
      if (!mask.get(x, y)) continue;
      for (int c = 0; c < base.channels(); ++c) out.at(x, y, c) = edited.at(x, y, c);
    }
  }
  return out;
}

Mask rect_mask(int width, int height, const PixelRect& rect) {
  Mask m(width, height);
  m.fill(rect);
  return m;
}

}  // namespace egogen
