#pragma once

#include <filesystem>
#include <stdexcept>
#include <vector>

#include "ltip/image.hpp"

namespace ltip {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes "PF" (3 channels) or "Pf" (1 channel) with scale -1.0: 32-bit
/// little-endian floats, bottom row first.
void write_pfm(const std::filesystem::path& path, const Image& image);

/// Reads PF/Pf files of either endianness.
Image read_pfm(const std::filesystem::path& path);

/// Integer codes decoded from a PNG or JPEG file.
struct RawImage {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 or 3 after alpha is dropped
    int bit_depth = 8;
    std::vector<std::uint16_t> samples;  // interleaved
};

/// PNG (8/16-bit, grey/RGB, alpha dropped, palette expanded) or JPEG (8-bit).
RawImage read_raw(const std::filesystem::path& path);

/// code / (2^bits - 1), clamped into [0, 1 - kClampMargin]; grey is promoted
/// to three identical channels.
Image normalize_raw(const RawImage& raw);

Image decode_image(const std::filesystem::path& path);

/// 8-bit PNG with code = floor(v * 255 + 0.5), clamped to [0, 255].
void encode_png(const std::filesystem::path& path, const Image& image);

std::uint8_t quantize8(double v) noexcept;

}  // namespace ltip
