// Acceptance suite: one PASS/FAIL line per primary criterion. Tolerances and
// time budgets are fixed here; the exit status is nonzero if any line fails.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

#include "actfloor/elo.hpp"
#include "actfloor/genlab.hpp"
#include "actfloor/grid.hpp"
#include "actfloor/metrics.hpp"
#include "actfloor/rng.hpp"
#include "actfloor/vectorize.hpp"
#include "fixtures.hpp"

using namespace actfloor;
namespace fs = std::filesystem;

namespace {

constexpr double kEloTolerance = 0.005;
constexpr double kPoolTolerance = 1e-8;
constexpr double kLossTolerance = 1e-9;
constexpr double kInfoTolerance = 1e-6;
constexpr double kHuTolerance = 1e-6;
constexpr double kMinEdgeRate = 0.95;
constexpr double kMinArea = 0.90, kMaxArea = 1.00;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& why) {
    if (!ok && pass) detail << "[" << why << "] ";
    pass &= ok;
  }
};

int failures = 0;

void criterion(const char* name, double budget_s, const std::function<void(Verdict&)>& body) {
  Verdict o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.check(secs < budget_s, "over time budget");
  if (!o.pass) ++failures;
  std::printf("%s  %-22s %s(%.2f s, budget %.0f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str(), secs,
              budget_s);
  std::fflush(stdout);
}

// --- independent oracles ----------------------------------------------------

double oracle_scale(RoomLabel l) {
  static const std::map<int, double> table = {{0, 0.0},   {1, 0.1},   {2, 0.2},   {3, 0.3},
                                              {4, 0.4},   {5, 0.5},   {6, 0.6},   {7, 0.7},
                                              {100, 0.8}, {120, 0.9}, {140, 1.0}, {255, 0.0}};
  return table.at(code(l));
}

struct Info {
  double mi = 0, ha = 0, hb = 0;
};

Info oracle_info(const RealImage& a, const RealImage& b) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> pa, pb;
  const double n = static_cast<double>(a.size());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) {
      const int i = static_cast<int>(std::floor(a(x, y) * 255.0 + 0.5));
      const int j = static_cast<int>(std::floor(b(x, y) * 255.0 + 0.5));
      joint[{i, j}] += 1.0 / n;
      pa[i] += 1.0 / n;
      pb[j] += 1.0 / n;
    }
  Info o;
  for (auto [k, p] : pa) o.ha -= p * std::log(p);
  for (auto [k, p] : pb) o.hb -= p * std::log(p);
  for (auto [k, p] : joint) o.mi += p * std::log(p / (pa[k.first] * pb[k.second]));
  return o;
}

// Expected outcome of each success condition, read straight off the raster:
// room regions carry one label each, the type mix, and which rooms have a
// door pixel whose other side is the living area.
struct ConditionOracle {
  bool closed = true, balanced = true, connected = true;
};

ConditionOracle raster_conditions(const RasterFloorplan& fp) {
  ConditionOracle o;
  const auto regions = room_regions(fp);
  bool living = false, master = false;
  for (const auto& r : regions) {
    living |= r.type == RoomLabel::Living;
    master |= r.type == RoomLabel::Master;
  }
  o.balanced = living && master;
  auto opens_to_living = [&](const Mask& region, RoomLabel opening) {
    const Mask door = label_mask(fp.category, opening);
    const Components c = label_components(door);
    for (int id = 1; id <= c.count; ++id) {
      bool touches_region = false, touches_living = false;
      for (int y = 0; y < fp.height(); ++y)
        for (int x = 0; x < fp.width(); ++x) {
          if (c.labels(x, y) != id) continue;
          for (Point d : kNeighbors4) {
            const Point q{x + d.x, y + d.y};
            if (!fp.category.in_bounds(q)) continue;
            touches_region |= region.empty() || region[q];
            touches_living |= fp.category[q] == RoomLabel::Living;
          }
        }
      if (touches_region && touches_living) return true;
    }
    return false;
  };
  o.connected = opens_to_living(Mask(), RoomLabel::MainEntrance);
  for (const auto& r : regions) {
    if (r.type == RoomLabel::Living || r.type == RoomLabel::Bathroom || r.type == RoomLabel::Balcony) continue;
    o.connected &= opens_to_living(r.pixels, RoomLabel::InteriorDoor);
  }
  return o;
}

Mask random_blob(Rng& rng, int size) {
  Mask m(size, size, 0);
  const int n = rng.uniform_int(2, 5);
  for (int i = 0; i < n; ++i) {
    const int w = rng.uniform_int(4, 20), h = rng.uniform_int(4, 20);
    const int x = rng.uniform_int(0, size - w - 1), y = rng.uniform_int(0, size - h - 1);
    for (int yy = y; yy < y + h; ++yy)
      for (int xx = x; xx < x + w; ++xx) m(xx, yy) = 1;
  }
  return m;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ACTFLOOR_BIN) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::map<std::string, std::vector<std::uint8_t>> snapshot_dir(const fs::path& dir) {
  std::map<std::string, std::vector<std::uint8_t>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = read_file_bytes(e.path());
  return out;
}

}  // namespace

int main() {
  criterion("elo_calibration", 1.0, [](Verdict& o) {
    const double e = elo_expected(1100, 1000).first;
    o.check(std::abs(e - 0.64) <= kEloTolerance, "expected score off");
    Rng rng(2024);
    EloTable t;
    const char* names[] = {"a", "b", "c", "d", "e", "f"};
    for (auto n : names) t = t.with_player(n);
    bool exact = true;
    for (int i = 0; i < 10000; ++i) {
      const auto a = rng.index(6);
      auto b = rng.index(5);
      if (b >= a) ++b;
      const double ra = t.rating(names[a]), rb = t.rating(names[b]);
      t = elo_update(std::move(t), names[a], names[b], static_cast<actfloor::Outcome>(rng.index(3)));
      const double d = t.history.back().delta_a;
      exact &= t.rating(names[a]) == ra + d && t.rating(names[b]) == rb - d;
    }
    // Each transfer is exact; the pool total only carries summation rounding.
    double pool = 0;
    for (auto n : names) pool += t.rating(n);
    const double net = pool - 6 * t.initial_rating;
    o.check(exact, "per-match transfer not exact");
    o.check(std::abs(net) <= kPoolTolerance, "rating pool drifted");
    o.detail << "E(+100)=" << e << " net=" << net << " over " << t.history.size() << " matches ";
  });

  criterion("loss_system", 1.0, [](Verdict& o) {
    const ForwardGenerator g_f = [](const ImageStack& b, const RealImage&) { return b; };
    const BackwardGenerator g_b = [](const ImageStack& f) { return f; };
    const Discriminator d = [](const ImageStack& x) { return ScoreMap(x[0].width() / 16, x[0].height() / 16, 0.5); };
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      // Downsampled pairs keep the 50-sample sweep well inside the budget.
      const auto fp = make_procedural_floorplan(s);
      LabelImage small(64, 64);
      for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) small(x, y) = fp.category(4 * x, 4 * y);
      Mask inside(64, 64, 0), entrance(64, 64, 0);
      for (std::size_t i = 0; i < small.size(); ++i) inside.pixels()[i] = small.pixels()[i] != RoomLabel::Outside;
      entrance.pixels()[0] = 1;
      inside.pixels()[0] = 1;
      const BoundaryImage b{inside, outline(inside), entrance};
      const TrainingSample sample{boundary_stack(b), RealImage(64, 64, 0.25), one_hot(small)};
      const auto p = evaluate_objective(g_f, g_b, d, d, {sample});
      for (double v : {p.cyc_b, p.cyc_f, p.id_b, p.id_f}) worst = std::max(worst, std::abs(v));
    }
    o.check(worst <= kLossTolerance, "reconstruction term nonzero");
    const double total = total_loss({1, 1, 1, 1, 1, 1}, {1, 10, 5});
    o.check(total == 32.0, "total_loss != 32");
    const double adv = adversarial_loss(ScoreMap(8, 8, 0.5), ScoreMap(8, 8, 0.5));
    o.check(std::abs(adv - 2 * std::log(0.5)) <= kLossTolerance, "adversarial at 0.5 off");
    o.detail << "max|cyc,id|=" << worst << " total=" << total << " adv=" << adv << " ";
  });

  criterion("activity_synthesis", 60.0, [](Verdict& o) {
    std::size_t edges = 0, solved = 0, samples = 0, outside = 0, mismatched = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto fp = make_procedural_floorplan(10000 + s);
      const auto e = simulate_entry(fp, BiRrtParams{}, s, 1);
      edges += e.sim.edges_total;
      solved += e.sim.edges_solved;
      const auto spaces = build_free_space(fp, e.furniture);
      for (const auto& path : e.sim.living_paths)
        for (std::size_t i = 0; i < path.size(); ++i) {
          ++samples;
          outside += !spaces.living.free(path[i]) || (i && !spaces.living.segment_free(path[i - 1], path[i]));
        }
      for (const auto& path : e.sim.room_paths)
        for (std::size_t i = 0; i < path.size(); ++i) {
          ++samples;
          outside += !spaces.interior.free(path[i]) || (i && !spaces.interior.segment_free(path[i - 1], path[i]));
        }
      if (s % 4 == 0) {
        const auto again = simulate_entry(fp, BiRrtParams{}, s, 2);
        mismatched += encode_activity_png(again.sim.map) != encode_activity_png(e.sim.map) || again.sim.map != e.sim.map;
      }
    }
    Rng rng(5);
    RealImage a(64, 64), b(64, 64);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a.pixels()[i] = rng.unit();
      b.pixels()[i] = rng.unit();
    }
    const auto blend = blend_activity(a, b, Mask(64, 64, 1));
    bool exact = true;
    for (std::size_t i = 0; i < a.size(); ++i)
      exact &= blend.density.pixels()[i] == std::clamp(0.6 * a.pixels()[i] + 0.4 * b.pixels()[i], 0.0, 1.0);
    const double rate = static_cast<double>(solved) / edges;
    o.check(rate >= kMinEdgeRate, "edge rate below 95%");
    o.check(outside == 0, "samples outside free space");
    o.check(exact, "blend not exact");
    o.check(mismatched == 0, "maps not reproducible");
    o.detail << "edges " << solved << "/" << edges << " samples " << samples - outside << "/" << samples
             << " free, repeat mismatches " << mismatched << " ";
  });

  criterion("vectorization", 30.0, [](Verdict& o) {
    int ok = 0, agree = 0;
    double min_area = 1e9, max_area = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto fp = make_procedural_floorplan(20000 + s);
      // Ground-truth-style activity: a peak just inside each room's door.
      RealImage act(256, 256, 0.0);
      const Mask doors = label_mask(fp.category, RoomLabel::InteriorDoor);
      for (int y = 0; y < 256; ++y)
        for (int x = 0; x < 256; ++x)
          if (is_room_type(fp.category(x, y)))
            for (Point d : kNeighbors4)
              if (doors.in_bounds(x + d.x, y + d.y) && doors(x + d.x, y + d.y)) act(x, y) = 1.0;
      const auto vf = vectorize(fp.category, ActivityMap{act});
      const auto rep = check_success(vf);
      const auto want = raster_conditions(fp);
      ok += rep.ok;
      agree += rep.failed(SuccessCondition::ClosedRooms) != want.closed &&
               rep.failed(SuccessCondition::BalancedTypes) != want.balanced &&
               rep.failed(SuccessCondition::LivingConnectivity) != want.connected;
      long area = 0;
      for (const auto& r : vf.rooms) area += polygon_area(r.polygon);
      const double ratio = static_cast<double>(area) / count_set(fp.inside);
      min_area = std::min(min_area, ratio);
      max_area = std::max(max_area, ratio);
    }
    o.check(ok == 50, "not every fixture succeeded");
    o.check(agree == 50, "condition disagrees with raster oracle");
    o.check(min_area >= kMinArea && max_area <= kMaxArea, "area outside [0.9, 1]");
    o.detail << ok << "/50 ok, oracle agreement " << agree << "/50, area [" << min_area << ", " << max_area << "] ";
  });

  criterion("metrics_oracles", 30.0, [](Verdict& o) {
    Rng rng(11);
    double worst_info = 0.0, worst_self = 0.0;
    for (int t = 0; t < 100; ++t) {
      RealImage a(32, 32), b(32, 32);
      const int la = rng.uniform_int(2, 40), lb = rng.uniform_int(2, 40);
      for (auto& v : a.pixels()) v = static_cast<double>(rng.index(la)) / (la - 1);
      for (auto& v : b.pixels()) v = rng.unit() < 0.5 ? static_cast<double>(rng.index(lb)) / (lb - 1) : rng.unit();
      const auto w = oracle_info(a, b);
      worst_info = std::max(worst_info, std::abs(mutual_information(a, b) - w.mi));
      worst_info = std::max(worst_info, std::abs(nmi(a, b) - 2 * w.mi / (w.ha + w.hb)));
      if (entropy(a) > 0) worst_self = std::max(worst_self, std::abs(nmi(a, a) - 1.0));
    }
    double worst_hu = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Mask m = random_blob(rng, 48);
      Mask moved(96, 96, 0), scaled(144, 144, 0);
      const int dx = rng.uniform_int(1, 40), dy = rng.uniform_int(1, 40);
      for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 48; ++x) moved(x + dx, y + dy) = m(x, y);
      for (int y = 0; y < 144; ++y)
        for (int x = 0; x < 144; ++x) scaled(x, y) = m(x / 3, y / 3);
      worst_hu = std::max({worst_hu, hu_distance(m, moved), hu_distance(m, scaled)});
    }
    bool exact = true;
    for (int t = 0; t < 20; ++t) {
      LabelImage p(40, 30), g(40, 30);
      for (auto& v : p.pixels()) v = kAllLabels[rng.index(12)];
      for (auto& v : g.pixels()) v = kAllLabels[rng.index(12)];
      double se = 0, ae = 0;
      long n = 0;
      for (int y = 0; y < 30; ++y)
        for (int x = 0; x < 40; ++x) {
          if (g(x, y) == RoomLabel::Outside) continue;
          const double d = oracle_scale(p(x, y)) - oracle_scale(g(x, y));
          se += d * d;
          ae += std::abs(d);
          ++n;
        }
      const auto got = pixel_error(p, g);
      exact &= got.mse == se / n && got.mae == ae / n;
    }
    o.check(worst_info <= kInfoTolerance, "MI/NMI off oracle");
    o.check(worst_self <= kInfoTolerance, "NMI(x,x) != 1");
    o.check(worst_hu <= kHuTolerance, "Hu distance not invariant");
    o.check(exact, "MSE/MAE differ from double loop");
    o.detail << "max|MI,NMI err|=" << worst_info << " max|NMI(x,x)-1|=" << worst_self << " max Hu=" << worst_hu << " ";
  });

  criterion("retrieval_generator", 120.0, [](Verdict& o) {
    const auto index = testing_support::shared_index(30000, 20);
    int self = 0;
    for (const auto& e : index->entries())
      self += retrieval_generate(GeneratorInput::make(e.boundary, e.activity), *index, 10) == e.category;
    long pixels = 0, leaks = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto b = extract_boundary(make_procedural_floorplan(40000 + s));
      const auto& act = (*index)[s % index->size()].activity;
      const auto out = RetrievalGenerator(index, 1 + s % 10).generate(GeneratorInput::make(b, act), s);
      for (std::size_t i = 0; i < out.size(); ++i) {
        ++pixels;
        leaks += (out.pixels()[i] == RoomLabel::Outside) != (b.inside.pixels()[i] == 0);
      }
    }
    o.check(self == static_cast<int>(index->size()), "self-retrieval changed a layout");
    o.check(leaks == 0, "confinement violated");
    o.detail << "self " << self << "/" << index->size() << ", confined " << pixels - leaks << "/" << pixels << " px ";
  });

  criterion("cli_determinism", 120.0, [](Verdict& o) {
    testing_support::TempDir dir("acceptance_cli");
    const std::string data = "'" + (dir / "data").string() + "'", acts = "'" + (dir / "acts").string() + "'";
    o.check(run_cli("fixtures --count 6 --seed 500 --out " + data) == 0, "fixtures failed");
    const auto manifest = list_manifests(dir / "data").front();
    const auto id = load_floorplan(manifest).id;
    const std::string simulate = "simulate --seed 9 --dataset " + data + " --out " + acts;
    const std::string generate = "generate --seed 9 --boundary '" + manifest.string() + "' --activity '" +
                                 (dir / "acts" / (id + "_activity.png")).string() + "' --dataset " + data +
                                 " --activity-dir " + acts + " --out '" + (dir / "gen").string() + "'";
    o.check(run_cli(simulate) == 0 && run_cli(generate) == 0, "first run failed");
    const auto sim1 = snapshot_dir(dir / "acts"), gen1 = snapshot_dir(dir / "gen");
    o.check(run_cli(simulate) == 0 && run_cli(generate) == 0, "second run failed");
    const auto sim2 = snapshot_dir(dir / "acts"), gen2 = snapshot_dir(dir / "gen");
    o.check(!sim1.empty() && sim1 == sim2, "simulate output differs");
    o.check(!gen1.empty() && gen1 == gen2, "generate output differs");
    o.detail << sim1.size() << " simulate files, " << gen1.size() << " generate files byte-identical ";
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
