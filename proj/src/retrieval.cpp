#include <algorithm>
#include <cmath>
#include <fstream>

#include "actfloor/genlab.hpp"
#include "actfloor/grid.hpp"
#include "actfloor/json_io.hpp"
#include "actfloor/rng.hpp"

namespace actfloor {

namespace fs = std::filesystem;

DatasetIndex::DatasetIndex(std::vector<IndexEntry> entries) : entries_(std::move(entries)) {}

std::optional<std::size_t> DatasetIndex::find(const std::string& id) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].id == id) return i;
  return std::nullopt;
}

std::vector<IndexMatch> DatasetIndex::rank(const Mask& inside, std::size_t top) const {
  const HuSignature q = hu_signature(inside);
  std::vector<IndexMatch> out;
  out.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) out.push_back({i, hu_distance(q, entries_[i].hu)});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.distance < b.distance; });
  if (top > 0 && out.size() > top) out.resize(top);
  return out;
}

IndexEntry make_index_entry(const RasterFloorplan& fp, ActivityMap activity, std::vector<FurnitureInstance> furniture) {
  require_same_size(fp.inside, activity.density, "activity map and floorplan differ in size");
  IndexEntry e;
  e.id = fp.id;
  e.boundary = extract_boundary(fp);
  e.hu = hu_signature(fp.inside);
  e.activity = std::move(activity);
  e.category = fp.category;
  e.furniture = std::move(furniture);
  return e;
}

std::uint64_t entry_seed(std::uint64_t seed, const std::string& id) { return derive_seed(seed, fnv1a(id)); }

EntrySimulation simulate_entry(const RasterFloorplan& fp, const BiRrtParams& params, std::uint64_t seed,
                               unsigned jobs) {
  const std::uint64_t s = entry_seed(seed, fp.id);
  EntrySimulation out;
  out.furniture = place_primary_furniture(fp, PlacementPolicy::defaults(), derive_seed(s, 1));
  out.sim = simulate_activity(fp, out.furniture, params, derive_seed(s, 2), jobs);
  return out;
}

DatasetIndex load_index(const fs::path& dataset_dir, const fs::path& activity_dir, std::uint64_t seed,
                        std::vector<std::string>* skipped) {
  if (!fs::is_directory(dataset_dir)) fail(ErrorCode::IoFailure, "dataset directory not found: " + dataset_dir.string());
  std::vector<IndexEntry> entries;
  for (const auto& manifest : list_manifests(dataset_dir)) {
    try {
      RasterFloorplan fp = load_floorplan(manifest);
      validate(fp);
      const fs::path act = activity_dir / (fp.id + "_activity.png");
      const fs::path furn = activity_dir / (fp.id + "_furniture.json");
      if (!activity_dir.empty() && fs::exists(act) && fs::exists(furn)) {
        std::ifstream in(furn);
        const auto j = nlohmann::json::parse(in);
        entries.push_back(make_index_entry(fp, load_activity_png(act), furniture_list_from_json(j.at("furniture"))));
      } else {
        auto sim = simulate_entry(fp, BiRrtParams{}, seed);
        entries.push_back(make_index_entry(fp, std::move(sim.sim.map), std::move(sim.furniture)));
      }
    } catch (const std::exception& e) {
      if (skipped) skipped->push_back(manifest.filename().string() + ": " + e.what());
    }
  }
  return DatasetIndex(std::move(entries));
}

// ---------------------------------------------------------------------------

LabelImage transfer_layout(const LabelImage& source, const BoundaryImage& query) {
  const int w = query.width(), h = query.height();
  Mask src_inside(source.width(), source.height(), 0);
  for (std::size_t i = 0; i < source.size(); ++i) src_inside.pixels()[i] = source.pixels()[i] != RoomLabel::Outside;
  const Rect sb = bounding_box(src_inside);
  const Rect qb = bounding_box(query.inside);

  LabelImage out(w, h, RoomLabel::Outside);
  Mask uncovered(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!query.inside(x, y)) continue;
      if (query.entrance(x, y)) {
        out(x, y) = RoomLabel::MainEntrance;
        continue;
      }
      if (query.boundary(x, y)) {
        out(x, y) = RoomLabel::Wall;
        continue;
      }
      RoomLabel l = RoomLabel::Outside;
      if (!sb.empty()) {
        // Nearest-neighbour map of the query bbox onto the source bbox.
        const int sx = std::clamp(sb.x + static_cast<int>(std::floor((x - qb.x + 0.5) * sb.w / qb.w)), sb.x, sb.right() - 1);
        const int sy = std::clamp(sb.y + static_cast<int>(std::floor((y - qb.y + 0.5) * sb.h / qb.h)), sb.y, sb.bottom() - 1);
        l = source(sx, sy);
      }
      if (l == RoomLabel::MainEntrance) l = RoomLabel::Wall;
      if (l == RoomLabel::Outside) uncovered(x, y) = 1;
      else out(x, y) = l;
    }
  }

  // Layered 4-connected BFS from room pixels through the uncovered ones; a
  // pixel reached from several labels in the same layer takes the lowest code.
  std::vector<Point> frontier;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (is_room_type(out(x, y))) frontier.push_back({x, y});
  while (!frontier.empty()) {
    std::vector<Point> next;
    for (Point p : frontier) {
      for (Point d : kNeighbors4) {
        const Point q{p.x + d.x, p.y + d.y};
        if (!uncovered.in_bounds(q) || !uncovered[q]) continue;
        if (out[q] == RoomLabel::Outside) {
          out[q] = out[p];
          next.push_back(q);
        } else if (code(out[p]) < code(out[q])) {
          out[q] = out[p];
        }
      }
    }
    for (Point q : next) uncovered[q] = 0;
    frontier = std::move(next);
  }
  for (std::size_t i = 0; i < uncovered.size(); ++i)
    if (uncovered.pixels()[i]) out.pixels()[i] = RoomLabel::Living;
  return out;
}

LabelImage retrieval_generate(const GeneratorInput& input, const DatasetIndex& index, std::size_t k) {
  if (index.empty()) fail(ErrorCode::EmptyIndex, "dataset index is empty");
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  const auto top = index.rank(input.boundary.inside, k);
  std::size_t best = top.front().entry;
  if (top.size() > 1) {
    double best_nmi = -1.0;
    for (const auto& m : top) {
      double v = 0.0;
      const auto& act = index[m.entry].activity.density;
      if (act.same_size(input.activity.density)) {
        try {
          v = nmi(input.activity.density, act);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::ZeroEntropy) throw;
        }
      }
      if (v > best_nmi) {
        best_nmi = v;
        best = m.entry;
      }
    }
  }
  return transfer_layout(index[best].category, input.boundary);
}

RetrievalGenerator::RetrievalGenerator(std::shared_ptr<const DatasetIndex> index, std::size_t k)
    : index_(std::move(index)), k_(k) {
  if (!index_) fail(ErrorCode::EmptyIndex, "no dataset index");
  if (k_ < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
}

LabelImage RetrievalGenerator::generate(const GeneratorInput& input, std::uint64_t) const {
  return retrieval_generate(input, *index_, k_);
}

}  // namespace actfloor
