#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "actfloor/image.hpp"

namespace actfloor {

/// Decoded 8-bit PNG, interleaved channels (1 = gray, 3 = RGB).
struct PngPixels {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;
};

PngPixels decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const PngPixels& png);

PngPixels read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const PngPixels& png);

/// Single-channel helpers; multi-channel input is rejected rather than
/// silently converted.
Image<std::uint8_t> read_gray_png(const std::filesystem::path& path);
void write_gray_png(const std::filesystem::path& path, const Image<std::uint8_t>& img);
PngPixels to_png(const Image<std::uint8_t>& img);
Image<std::uint8_t> gray_from_png(const PngPixels& png);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace actfloor
