#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "actfloor/floorplan.hpp"
#include "actfloor/png_io.hpp"

namespace actfloor {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path manifest_path(const fs::path& path) {
  if (fs::is_directory(path)) return path / "manifest.json";
  return path;
}

Mask mask_from_png(const Image<std::uint8_t>& img, const char* channel) {
  Mask m(img.width(), img.height(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto v = img.pixels()[i];
    if (v != 0 && v != 255)
      fail(ErrorCode::IllegalLabel, std::string(channel) + " mask holds a value other than 0/255");
    m.pixels()[i] = v ? 1 : 0;
  }
  return m;
}

Image<std::uint8_t> mask_to_png(const Mask& m) {
  Image<std::uint8_t> img(m.width(), m.height(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) img.pixels()[i] = m.pixels()[i] ? 255 : 0;
  return img;
}

Image<std::uint8_t> read_channel(const json& manifest, const char* key, const fs::path& base) {
  if (!manifest.contains(key) || !manifest[key].is_string())
    fail(ErrorCode::MissingChannel, std::string("manifest lacks channel '") + key + "'");
  const fs::path file = base / manifest[key].get<std::string>();
  if (!fs::exists(file)) fail(ErrorCode::MissingChannel, "channel file not found: " + file.string());
  return read_gray_png(file);
}

}  // namespace

RasterFloorplan load_floorplan(const fs::path& path) {
  const fs::path mpath = manifest_path(path);
  std::ifstream in(mpath);
  if (!in) fail(ErrorCode::IoFailure, "cannot open manifest " + mpath.string());
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    fail(ErrorCode::IoFailure, "malformed manifest " + mpath.string() + ": " + e.what());
  }
  const fs::path base = mpath.parent_path();

  const auto inside = read_channel(manifest, "inside", base);
  const auto boundary = read_channel(manifest, "boundary", base);
  const auto category = read_channel(manifest, "category", base);
  const auto ids = read_channel(manifest, "room_ids", base);
  for (const auto* img : {&inside, &boundary, &ids})
    if (!img->same_size(category)) fail(ErrorCode::SizeMismatch, "channel sizes differ in " + mpath.string());

  RasterFloorplan fp;
  fp.id = manifest.value("id", mpath.stem().string());
  fp.inside = mask_from_png(inside, "inside");
  fp.boundary = mask_from_png(boundary, "boundary");
  fp.category = labels_from_codes(category);
  fp.room_ids = ids;
  validate(fp);
  return fp;
}

void save_floorplan(const RasterFloorplan& fp, const fs::path& path) {
  validate(fp);
  fs::path mpath = path;
  if (fs::is_directory(path) || !path.has_extension()) {
    std::error_code ec;
    fs::create_directories(path, ec);
    mpath = path / "manifest.json";
  }
  const fs::path base = mpath.parent_path();
  const std::string stem = fp.id.empty() ? mpath.stem().string() : fp.id;

  const json manifest = {{"id", fp.id},
                         {"inside", stem + "_inside.png"},
                         {"boundary", stem + "_boundary.png"},
                         {"category", stem + "_category.png"},
                         {"room_ids", stem + "_ids.png"}};
  write_gray_png(base / (stem + "_inside.png"), mask_to_png(fp.inside));
  write_gray_png(base / (stem + "_boundary.png"), mask_to_png(fp.boundary));
  write_gray_png(base / (stem + "_category.png"), label_codes(fp.category));
  write_gray_png(base / (stem + "_ids.png"), fp.room_ids);

  std::ofstream out(mpath, std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot write manifest " + mpath.string());
  out << manifest.dump(2) << '\n';
  if (!out) fail(ErrorCode::IoFailure, "short write to " + mpath.string());
}

std::vector<fs::path> list_manifests(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) fail(ErrorCode::IoFailure, "not a directory: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    const auto name = entry.path().filename().string();
    // Sidecar files written next to manifests are not manifests themselves.
    if (name.ends_with("_furniture.json") || name == "run.json" || name.ends_with("_report.json")) continue;
    out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace actfloor
