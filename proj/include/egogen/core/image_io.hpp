// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "egogen/core/image.hpp"

namespace egogen {

/// Decodes any format OpenCV understands; 4-channel input drops alpha.
Image read_image(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Image& image);

std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_image(std::span<const std::uint8_t> bytes);

/// Single-channel PNG, 0 = keep, 255 = inpaint.
void write_mask_png(const std::filesystem::path& path, const Mask& mask);
/// Any non-zero value counts as set.
Mask read_mask_png(const std::filesystem::path& path);
Mask mask_from_image(const Image& image);
Image mask_to_image(const Mask& mask);

/// Bilinear (area when shrinking) resample.
Image resize(const Image& image, int width, int height);
Mask resize_nearest(const Mask& mask, int width, int height);

}  // namespace egogen
