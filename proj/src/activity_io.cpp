#include <cmath>
#include <cstring>
#include <fstream>

#include "actfloor/actsim.hpp"
#include "actfloor/png_io.hpp"

namespace actfloor {

namespace {
constexpr char kMagic[8] = {'A', 'C', 'T', 'F', 'M', 'A', 'P', '\0'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}
}  // namespace

Image<std::uint8_t> activity_to_gray(const ActivityMap& map) {
  map.validate();
  Image<std::uint8_t> out(map.width(), map.height(), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.pixels()[i] = static_cast<std::uint8_t>(std::lround(map.density.pixels()[i] * 255.0));
  return out;
}

ActivityMap activity_from_gray(const Image<std::uint8_t>& gray) {
  ActivityMap m{RealImage(gray.width(), gray.height(), 0.0)};
  for (std::size_t i = 0; i < gray.size(); ++i) m.density.pixels()[i] = gray.pixels()[i] / 255.0;
  return m;
}

std::vector<std::uint8_t> encode_activity_png(const ActivityMap& map) { return encode_png(to_png(activity_to_gray(map))); }

void save_activity_png(const ActivityMap& map, const std::filesystem::path& path) {
  write_gray_png(path, activity_to_gray(map));
}

ActivityMap load_activity_png(const std::filesystem::path& path) { return activity_from_gray(read_gray_png(path)); }

void save_activity_f32(const ActivityMap& map, const std::filesystem::path& path) {
  map.validate();
  std::vector<std::uint8_t> out(kMagic, kMagic + 8);
  put_u32(out, static_cast<std::uint32_t>(map.width()));
  put_u32(out, static_cast<std::uint32_t>(map.height()));
  for (double v : map.density.pixels()) {
    const float f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(out, bits);
  }
  write_file_bytes(path, out);
}

ActivityMap load_activity_f32(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    fail(ErrorCode::IoFailure, "not an activity map file: " + path.string());
  const std::uint32_t w = get_u32(bytes.data() + 8), h = get_u32(bytes.data() + 12);
  if (w > 65536 || h > 65536 || bytes.size() != 16 + std::size_t(w) * h * 4)
    fail(ErrorCode::IoFailure, "truncated activity map file: " + path.string());
  ActivityMap m{RealImage(static_cast<int>(w), static_cast<int>(h), 0.0)};
  for (std::size_t i = 0; i < m.density.size(); ++i) {
    const std::uint32_t bits = get_u32(bytes.data() + 16 + 4 * i);
    float f;
    std::memcpy(&f, &bits, 4);
    m.density.pixels()[i] = f;
  }
  m.validate();
  return m;
}

}  // namespace actfloor
