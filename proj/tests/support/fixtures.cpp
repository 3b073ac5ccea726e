#include "fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace testing_support {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  path_ = fs::temp_directory_path() /
          ("actfloor_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

SimulatedPlan simulated_plan(std::uint64_t plan_seed, std::uint64_t sim_seed) {
  SimulatedPlan p;
  p.plan = make_procedural_floorplan(plan_seed);
  auto e = simulate_entry(p.plan, BiRrtParams{}, sim_seed);
  p.furniture = std::move(e.furniture);
  p.sim = std::move(e.sim);
  return p;
}

std::shared_ptr<const DatasetIndex> shared_index(std::uint64_t first_seed, std::size_t count) {
  static std::mutex m;
  static std::map<std::pair<std::uint64_t, std::size_t>, std::shared_ptr<const DatasetIndex>> cache;
  std::lock_guard g(m);
  auto& slot = cache[{first_seed, count}];
  if (!slot) {
    std::vector<IndexEntry> entries;
    for (std::size_t i = 0; i < count; ++i) {
      auto p = simulated_plan(first_seed + i);
      entries.push_back(make_index_entry(p.plan, p.sim.map, p.furniture));
    }
    slot = std::make_shared<const DatasetIndex>(std::move(entries));
  }
  return slot;
}

LabelImage ascii_labels(const std::vector<std::string>& rows) {
  const int h = static_cast<int>(rows.size()), w = h ? static_cast<int>(rows[0].size()) : 0;
  LabelImage out(w, h, RoomLabel::Outside);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const char c = rows[y][x];
      RoomLabel l = RoomLabel::Outside;
      if (c == '#') l = RoomLabel::Wall;
      else if (c == 'D') l = RoomLabel::InteriorDoor;
      else if (c == 'E') l = RoomLabel::MainEntrance;
      else if (c >= '0' && c <= '7') l = static_cast<RoomLabel>(c - '0');
      out(x, y) = l;
    }
  return out;
}

Mask rect_mask(int w, int h, Rect r) {
  Mask m(w, h, 0);
  for (int y = r.y; y < r.bottom(); ++y)
    for (int x = r.x; x < r.right(); ++x)
      if (m.in_bounds(x, y)) m(x, y) = 1;
  return m;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
  const std::string s = read_text(p);
  return {s.begin(), s.end()};
}

}  // namespace testing_support
