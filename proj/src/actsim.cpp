#include "actfloor/actsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "actfloor/grid.hpp"
#include "actfloor/rng.hpp"

namespace actfloor {

// ---------------------------------------------------------------------------
// Free space

FreeSpaceMask::FreeSpaceMask(Mask walkable) : walkable_(std::move(walkable)) {
  component_ = label_components(walkable_).labels;
  bounds_ = bounding_box(walkable_);
}

bool FreeSpaceMask::free(Vec2 v) const {
  return free(Point{static_cast<int>(std::floor(v.x + 0.5)), static_cast<int>(std::floor(v.y + 0.5))});
}

bool FreeSpaceMask::connected(Point a, Point b) const {
  return free(a) && free(b) && component_[a] == component_[b];
}

bool FreeSpaceMask::segment_free(Vec2 a, Vec2 b) const {
  // Grid traversal over unit cells centred on integer coordinates: shift by
  // one half so cell i spans [i, i + 1).
  const double ax = a.x + 0.5, ay = a.y + 0.5;
  const double dx = b.x - a.x, dy = b.y - a.y;
  int ix = static_cast<int>(std::floor(ax)), iy = static_cast<int>(std::floor(ay));
  const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  constexpr double inf = std::numeric_limits<double>::infinity();
  double tx = sx == 0 ? inf : ((sx > 0 ? ix + 1 : ix) - ax) / dx;
  double ty = sy == 0 ? inf : ((sy > 0 ? iy + 1 : iy) - ay) / dy;
  const double ddx = sx == 0 ? inf : std::abs(1.0 / dx);
  const double ddy = sy == 0 ? inf : std::abs(1.0 / dy);

  for (int guard = 0; guard < 4 * (walkable_.width() + walkable_.height()) + 8; ++guard) {
    if (!free(Point{ix, iy})) return false;
    if (std::min(tx, ty) > 1.0) return true;
    if (tx < ty) {
      ix += sx;
      tx += ddx;
    } else if (ty < tx) {
      iy += sy;
      ty += ddy;
    } else {
      // Exactly through a cell corner: both side cells are touched.
      if (!free(Point{ix + sx, iy}) || !free(Point{ix, iy + sy})) return false;
      ix += sx;
      iy += sy;
      tx += ddx;
      ty += ddy;
    }
  }
  return false;
}

PartitionSpaces build_free_space(const RasterFloorplan& fp, const std::vector<FurnitureInstance>& furniture) {
  const int w = fp.width(), h = fp.height();
  Mask living(w, h, 0), rooms(w, h, 0), interior(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const RoomLabel l = fp.category(x, y);
      const bool opening = l == RoomLabel::InteriorDoor || l == RoomLabel::MainEntrance;
      living(x, y) = l == RoomLabel::Living || opening;
      rooms(x, y) = (is_room_type(l) && l != RoomLabel::Living) || l == RoomLabel::InteriorDoor;
      interior(x, y) = is_room_type(l) || opening;
    }
  }
  for (const auto& f : furniture) {
    const Mask cut = doorway_pixels(fp, f.entrance);
    for (std::size_t i = 0; i < cut.size(); ++i)
      if (cut.pixels()[i]) {
        living.pixels()[i] = 1;
        rooms.pixels()[i] = 1;
        interior.pixels()[i] = 1;
      }
  }
  for (const auto& f : furniture) {
    for (int y = std::max(f.rect.y, 0); y < std::min(f.rect.bottom(), h); ++y)
      for (int x = std::max(f.rect.x, 0); x < std::min(f.rect.right(), w); ++x) {
        living(x, y) = 0;
        rooms(x, y) = 0;
        interior(x, y) = 0;
      }
  }
  return {FreeSpaceMask(std::move(living)), FreeSpaceMask(std::move(rooms)), FreeSpaceMask(std::move(interior))};
}

// ---------------------------------------------------------------------------
// Connectivity graph

std::size_t ConnectivityGraph::count(EdgeKind kind) const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const auto& e) { return e.kind == kind; }));
}

std::size_t ConnectivityGraph::living_node_count() const {
  std::vector<int> seen;
  for (const auto& e : edges) {
    if (e.kind != EdgeKind::Living) continue;
    for (int n : {e.a, e.b})
      if (std::find(seen.begin(), seen.end(), n) == seen.end()) seen.push_back(n);
  }
  return seen.empty() && !nodes.empty() ? 1 : seen.size();
}

Point main_entrance_point(const RasterFloorplan& fp) {
  const auto pixels = set_pixels(label_mask(fp.category, RoomLabel::MainEntrance));
  if (pixels.empty()) fail(ErrorCode::NoEntrance, "floorplan has no main entrance");
  double cx = 0.0, cy = 0.0;
  for (auto p : pixels) {
    cx += p.x;
    cy += p.y;
  }
  cx /= pixels.size();
  cy /= pixels.size();
  Point best = pixels.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (auto p : pixels) {  // row-major order, so ties keep the lowest (y, x)
    const double d = (p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

namespace {

int add_node(ConnectivityGraph& g, Point p) {
  const auto it = std::find(g.nodes.begin(), g.nodes.end(), p);
  if (it != g.nodes.end()) return static_cast<int>(it - g.nodes.begin());
  g.nodes.push_back(p);
  return static_cast<int>(g.nodes.size()) - 1;
}

ConnectivityGraph build_graph(const RasterFloorplan& fp, const std::vector<FurnitureInstance>& furniture,
                              const PartitionSpaces& spaces) {
  ConnectivityGraph g;
  add_node(g, main_entrance_point(fp));
  std::vector<int> living_nodes{0};
  for (const auto& f : furniture) {
    const int n = add_node(g, f.entrance);
    if (std::find(living_nodes.begin(), living_nodes.end(), n) == living_nodes.end()) living_nodes.push_back(n);
  }
  for (std::size_t i = 0; i < living_nodes.size(); ++i)
    for (std::size_t j = i + 1; j < living_nodes.size(); ++j)
      g.edges.push_back({living_nodes[i], living_nodes[j], EdgeKind::Living, false});

  for (const auto& f : furniture) {
    const bool via_interior = f.room_id == 0;
    const auto anchor = furniture_anchor(via_interior ? spaces.interior.mask() : spaces.rooms.mask(), f);
    if (!anchor) continue;
    g.edges.push_back({add_node(g, f.entrance), add_node(g, *anchor), EdgeKind::Room, via_interior});
  }
  return g;
}

}  // namespace

ConnectivityGraph build_connectivity_graph(const RasterFloorplan& fp, const std::vector<FurnitureInstance>& furniture) {
  return build_graph(fp, furniture, build_free_space(fp, furniture));
}

// ---------------------------------------------------------------------------
// bi-RRT

void BiRrtParams::validate() const {
  if (!(step_size >= 1.0)) fail(ErrorCode::InvalidArgument, "step_size must be >= 1");
  if (max_iterations < 1) fail(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  if (!(goal_bias >= 0.0 && goal_bias < 1.0)) fail(ErrorCode::InvalidArgument, "goal_bias must be in [0,1)");
  if (runs_per_edge < 1) fail(ErrorCode::InvalidArgument, "runs_per_edge must be >= 1");
  if (!(splat_sigma > 0.0)) fail(ErrorCode::InvalidArgument, "splat_sigma must be positive");
}

namespace {

double dist(Vec2 a, Vec2 b) { return std::hypot(b.x - a.x, b.y - a.y); }

struct Tree {
  struct Node {
    Vec2 p;
    int parent;
  };
  std::vector<Node> nodes;

  int nearest(Vec2 q) const {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double dx = nodes[i].p.x - q.x, dy = nodes[i].p.y - q.y;
      const double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  std::vector<Vec2> trace(int i) const {
    std::vector<Vec2> out;
    for (; i >= 0; i = nodes[i].parent) out.push_back(nodes[i].p);
    return out;
  }
};

enum class Extend { Trapped, Advanced, Reached };

Extend extend(Tree& t, const FreeSpaceMask& free, Vec2 q, double step, int& added) {
  const int n = t.nearest(q);
  const Vec2 from = t.nodes[n].p;
  const double d = dist(from, q);
  if (d <= 1e-12) {
    added = n;
    return Extend::Reached;
  }
  const bool reach = d <= step;
  const Vec2 to = reach ? q : Vec2{from.x + (q.x - from.x) * step / d, from.y + (q.y - from.y) * step / d};
  if (!free.segment_free(from, to)) return Extend::Trapped;
  t.nodes.push_back({to, n});
  added = static_cast<int>(t.nodes.size()) - 1;
  return reach ? Extend::Reached : Extend::Advanced;
}

Polyline shortcut(const FreeSpaceMask& free, const Polyline& path) {
  Polyline out{path.front()};
  std::size_t i = 0;
  while (i + 1 < path.size()) {
    std::size_t j = path.size() - 1;
    while (j > i + 1 && !free.segment_free(path[i], path[j])) --j;
    out.push_back(path[j]);
    i = j;
  }
  return out;
}

Polyline resample(const Polyline& path, double step) {
  Polyline out{path.front()};
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Vec2 a = path[i - 1], b = path[i];
    const int n = std::max(1, static_cast<int>(std::ceil(dist(a, b) / step)));
    for (int k = 1; k < n; ++k)
      out.push_back({a.x + (b.x - a.x) * k / n, a.y + (b.y - a.y) * k / n});
    out.push_back(b);
  }
  return out;
}

}  // namespace

std::optional<Polyline> bi_rrt_path(const FreeSpaceMask& free, Point start, Point goal, const BiRrtParams& params,
                                    std::uint64_t seed) {
  params.validate();
  if (!free.free(start) || !free.free(goal)) fail(ErrorCode::InvalidArgument, "path endpoints must be free");
  const Vec2 s = to_vec(start), g = to_vec(goal);
  if (start == goal) return Polyline{s};
  if (!free.connected(start, goal)) return std::nullopt;
  if (free.segment_free(s, g)) return resample({s, g}, params.step_size);

  Rng rng(seed);
  Tree from_start{{{s, -1}}}, from_goal{{{g, -1}}};
  Tree* a = &from_start;
  Tree* b = &from_goal;
  const Rect& box = free.bounds();

  for (int it = 0; it < params.max_iterations; ++it) {
    Vec2 q;
    if (rng.unit() < params.goal_bias) {
      q = b->nodes.front().p;
    } else {
      q = {rng.uniform(box.x - 0.5, box.right() - 0.5), rng.uniform(box.y - 0.5, box.bottom() - 0.5)};
    }
    int new_a = -1;
    if (extend(*a, free, q, params.step_size, new_a) != Extend::Trapped) {
      const Vec2 target = a->nodes[new_a].p;
      int new_b = -1;
      Extend r;
      do r = extend(*b, free, target, params.step_size, new_b);
      while (r == Extend::Advanced);
      if (r == Extend::Reached) {
        auto head = a->trace(new_a);  // new_a .. root of a
        auto tail = b->trace(new_b);  // new_b .. root of b; new_b sits on target
        std::reverse(head.begin(), head.end());
        head.insert(head.end(), tail.begin() + 1, tail.end());
        if (a != &from_start) std::reverse(head.begin(), head.end());
        head.front() = s;
        head.back() = g;
        return resample(shortcut(free, head), params.step_size);
      }
    }
    std::swap(a, b);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Density

RealImage rasterize_density(const std::vector<Polyline>& paths, double sigma, int width, int height) {
  if (paths.empty()) fail(ErrorCode::EmptyInput, "no paths to rasterize");
  if (!(sigma > 0.0)) fail(ErrorCode::InvalidArgument, "sigma must be positive");
  RealImage acc(width, height, 0.0);
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  const double r2 = 9.0 * sigma * sigma;
  const double inv = 1.0 / (2.0 * sigma * sigma);

  auto splat = [&](Vec2 c) {
    const int cx = static_cast<int>(std::floor(c.x + 0.5)), cy = static_cast<int>(std::floor(c.y + 0.5));
    for (int y = std::max(0, cy - radius - 1); y <= std::min(height - 1, cy + radius + 1); ++y) {
      for (int x = std::max(0, cx - radius - 1); x <= std::min(width - 1, cx + radius + 1); ++x) {
        const double d2 = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y);
        if (d2 <= r2) acc(x, y) += std::exp(-d2 * inv);
      }
    }
  };

  for (const auto& path : paths) {
    if (path.empty()) continue;
    for (std::size_t i = 1; i < path.size(); ++i) {
      const Vec2 a = path[i - 1], b = path[i];
      const int n = std::max(1, static_cast<int>(std::ceil(dist(a, b))));
      for (int k = 0; k < n; ++k) splat({a.x + (b.x - a.x) * k / n, a.y + (b.y - a.y) * k / n});
    }
    splat(path.back());
  }

  double peak = 0.0;
  for (double v : acc.pixels()) peak = std::max(peak, v);
  if (peak > 0.0)
    for (double& v : acc.pixels()) v /= peak;
  return acc;
}

void ActivityMap::validate() const {
  for (double v : density.pixels())
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) fail(ErrorCode::InvalidArgument, "activity value outside [0,1]");
}

ActivityMap blend_activity(const RealImage& living, const RealImage& rooms, const Mask& inside) {
  require_same_size(living, rooms, "activity components differ in size");
  require_same_size(living, inside, "activity and inside mask differ in size");
  ActivityMap out{RealImage(living.width(), living.height(), 0.0)};
  for (std::size_t i = 0; i < living.size(); ++i) {
    if (!inside.pixels()[i]) continue;
    const double v = kLivingWeight * living.pixels()[i] + kRoomsWeight * rooms.pixels()[i];
    out.density.pixels()[i] = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

ActivitySimulation simulate_activity(const RasterFloorplan& fp, const std::vector<FurnitureInstance>& furniture,
                                     const BiRrtParams& params, std::uint64_t seed, unsigned jobs) {
  params.validate();
  const PartitionSpaces spaces = build_free_space(fp, furniture);
  ActivitySimulation sim;
  sim.graph = build_graph(fp, furniture, spaces);
  for (const auto& f : furniture)
    if (!furniture_anchor(f.room_id == 0 ? spaces.interior.mask() : spaces.rooms.mask(), f))
      sim.warnings.push_back(std::string(furniture_name(f.kind)) + " in room " + std::to_string(f.room_id) +
                             " has no reachable side; skipped");

  const auto& edges = sim.graph.edges;
  const std::size_t total_runs = edges.size() * static_cast<std::size_t>(params.runs_per_edge);
  std::vector<std::optional<Polyline>> results(total_runs);

  auto run_one = [&](std::size_t job) {
    const std::size_t e = job / params.runs_per_edge, run = job % params.runs_per_edge;
    const GraphEdge& edge = edges[e];
    const FreeSpaceMask& space = edge.kind == EdgeKind::Living ? spaces.living
                                 : edge.via_interior          ? spaces.interior
                                                              : spaces.rooms;
    const Point a = sim.graph.nodes[edge.a], b = sim.graph.nodes[edge.b];
    if (!space.free(a) || !space.free(b)) return;
    results[job] = bi_rrt_path(space, a, b, params, derive_seed(seed, e * 1024 + run));
  };

  if (jobs <= 1 || total_runs < 2) {
    for (std::size_t j = 0; j < total_runs; ++j) run_one(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < total_runs; j = next++) run_one(j);
      });
  }

  sim.edges_total = edges.size();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    bool solved = false;
    for (int run = 0; run < params.runs_per_edge; ++run) {
      auto& r = results[e * params.runs_per_edge + run];
      if (!r) continue;
      solved = true;
      (edges[e].kind == EdgeKind::Living ? sim.living_paths : sim.room_paths).push_back(std::move(*r));
    }
    if (solved) {
      ++sim.edges_solved;
    } else {
      const Point a = sim.graph.nodes[edges[e].a], b = sim.graph.nodes[edges[e].b];
      sim.warnings.push_back("edge (" + std::to_string(a.x) + "," + std::to_string(a.y) + ")-(" + std::to_string(b.x) +
                             "," + std::to_string(b.y) + ") unsolvable; skipped");
    }
  }
  if (sim.living_paths.empty() && sim.room_paths.empty())
    fail(ErrorCode::AllEdgesUnsolvable, "no connectivity edge could be simulated");

  const int w = fp.width(), h = fp.height();
  const RealImage zero(w, h, 0.0);
  const RealImage living = sim.living_paths.empty() ? zero : rasterize_density(sim.living_paths, params.splat_sigma, w, h);
  const RealImage rooms = sim.room_paths.empty() ? zero : rasterize_density(sim.room_paths, params.splat_sigma, w, h);
  sim.map = blend_activity(living, rooms, fp.inside);
  return sim;
}

ActivityMap synthesize_activity_map(const RasterFloorplan& fp, const std::vector<FurnitureInstance>& furniture,
                                    const BiRrtParams& params, std::uint64_t seed) {
  return simulate_activity(fp, furniture, params, seed).map;
}

}  // namespace actfloor
