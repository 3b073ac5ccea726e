#include "actfloor/png_io.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>

namespace actfloor {
namespace {

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t n) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->offset + n > cur->bytes.size()) png_error(png, "truncated PNG stream");
  std::memcpy(out, cur->bytes.data() + cur->offset, n);
  cur->offset += n;
}

void write_to_memory(png_structp png, png_bytep in, png_size_t n) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), in, in + n);
}

void flush_noop(png_structp) {}

[[noreturn]] void on_png_error(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

}  // namespace

PngPixels decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
    fail(ErrorCode::IoFailure, "not a PNG stream");

  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, on_png_error, on_png_warning);
  if (!png) fail(ErrorCode::IoFailure, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(ErrorCode::IoFailure, "png_create_info_struct failed");
  }

  ReadCursor cursor{bytes, 0};
  PngPixels out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::IoFailure, "PNG decode: " + message);
  }
  png_set_read_fn(png, &cursor, read_from_memory);
  png_read_info(png, info);

  const auto color = png_get_color_type(png, info);
  const auto depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  out.data.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
  rows.resize(out.height);
  for (int y = 0; y < out.height; ++y)
    rows[y] = out.data.data() + static_cast<std::size_t>(y) * out.width * out.channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

std::vector<std::uint8_t> encode_png(const PngPixels& img) {
  if (img.channels != 1 && img.channels != 3)
    fail(ErrorCode::InvalidArgument, "PNG encode supports 1 or 3 channels");
  if (img.data.size() != static_cast<std::size_t>(img.width) * img.height * img.channels)
    fail(ErrorCode::SizeMismatch, "PNG buffer does not match its dimensions");

  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, on_png_error, on_png_warning);
  if (!png) fail(ErrorCode::IoFailure, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(ErrorCode::IoFailure, "png_create_info_struct failed");
  }

  std::vector<std::uint8_t> out;
  std::vector<png_bytep> rows(img.height);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::IoFailure, "PNG encode: " + message);
  }
  png_set_write_fn(png, &out, write_to_memory, flush_noop);
  png_set_IHDR(png, info, img.width, img.height, 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  // Fixed settings keep the encoded bytes reproducible.
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_NONE);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y)
    rows[y] = const_cast<png_bytep>(img.data.data() + static_cast<std::size_t>(y) * img.width * img.channels);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::IoFailure, "short write to " + path.string());
}

PngPixels read_png(const std::filesystem::path& path) { return decode_png(read_file_bytes(path)); }

void write_png(const std::filesystem::path& path, const PngPixels& png) {
  write_file_bytes(path, encode_png(png));
}

PngPixels to_png(const Image<std::uint8_t>& img) {
  PngPixels png;
  png.width = img.width();
  png.height = img.height();
  png.channels = 1;
  png.data.assign(img.pixels().begin(), img.pixels().end());
  return png;
}

Image<std::uint8_t> gray_from_png(const PngPixels& png) {
  if (png.channels != 1) fail(ErrorCode::IllegalLabel, "expected a single-channel PNG");
  Image<std::uint8_t> img(png.width, png.height);
  std::copy(png.data.begin(), png.data.end(), img.pixels().begin());
  return img;
}

Image<std::uint8_t> read_gray_png(const std::filesystem::path& path) { return gray_from_png(read_png(path)); }

void write_gray_png(const std::filesystem::path& path, const Image<std::uint8_t>& img) {
  write_png(path, to_png(img));
}

}  // namespace actfloor
