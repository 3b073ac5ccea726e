#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "actfloor/genlab.hpp"
#include "actfloor/procedural.hpp"

namespace testing_support {

using namespace actfloor;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Procedural plan furnished and simulated with the batch seeding.
struct SimulatedPlan {
  RasterFloorplan plan;
  std::vector<FurnitureInstance> furniture;
  ActivitySimulation sim;
};
SimulatedPlan simulated_plan(std::uint64_t plan_seed, std::uint64_t sim_seed = 11);

/// Index over procedural plans first_seed .. first_seed + count - 1, built
/// once per process and shared.
std::shared_ptr<const DatasetIndex> shared_index(std::uint64_t first_seed = 1000, std::size_t count = 12);

/// Category image from rows of characters: '.' Outside, '#' Wall, 'D'
/// InteriorDoor, 'E' MainEntrance, digits 0-7 room codes.
LabelImage ascii_labels(const std::vector<std::string>& rows);

Mask rect_mask(int w, int h, Rect r);

std::string read_text(const std::filesystem::path& p);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p);

}  // namespace testing_support
