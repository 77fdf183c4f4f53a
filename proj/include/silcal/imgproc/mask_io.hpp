#pragma once

#include <array>
#include <string>

#include "silcal/common/image.hpp"

namespace silcal::imgproc {

using RgbImage = Image<std::array<std::uint8_t, 3>>;

/// Read a single-channel PNG or PGM (by file extension) and threshold:
/// values > 127 become 1. Multi-channel images are rejected with the
/// channel count in the message.
BinaryMask load_mask(const std::string& path);

/// Write a mask as 8-bit grayscale (0 / 255), PNG or PGM by extension.
void save_mask(const BinaryMask& mask, const std::string& path);

/// 8-bit grayscale PNG from arbitrary byte values (debug dumps).
void save_gray8_png(const Image<std::uint8_t>& img, const std::string& path);

/// 16-bit grayscale PNG (big-endian per PNG spec), used for scaled
/// distance-field dumps.
void save_gray16_png(const Image<std::uint16_t>& img, const std::string& path);

/// RGB PNG, used for calibration overlays.
void save_rgb_png(const RgbImage& img, const std::string& path);

}  // namespace silcal::imgproc
