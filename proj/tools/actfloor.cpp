// actfloor: batch front end (simulate, generate, eval, elo, serve, fixtures).

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "actfloor/elo.hpp"
#include "actfloor/genlab.hpp"
#include "actfloor/json_io.hpp"
#include "actfloor/metrics.hpp"
#include "actfloor/procedural.hpp"
#include "actfloor/server.hpp"
#include "actfloor/vectorize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace actfloor;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitPipeline = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string config;
  bool seed_given = false;
};

ServerConfig resolve_config(const Common& c) {
  ServerConfig cfg;
  if (!c.config.empty()) {
    try {
      cfg = load_config(c.config);
    } catch (const Error& e) {
      throw InputError(e.what());
    }
  }
  apply_env_overrides(cfg);
  return cfg;
}

std::uint64_t effective_seed(const Common& c, const ServerConfig& cfg) { return c.seed_given ? c.seed : cfg.seed; }

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot write " + p.string());
  out << text;
}

// Runs fn(i) for i in [0, n) on `jobs` threads.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, n); ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
}

BiRrtParams rrt_params(int runs, double step, double sigma) {
  BiRrtParams p;
  p.runs_per_edge = runs;
  p.step_size = step;
  p.splat_sigma = sigma;
  p.validate();
  return p;
}

json params_json(const BiRrtParams& p) {
  return {{"step_size", p.step_size},
          {"max_iterations", p.max_iterations},
          {"goal_bias", p.goal_bias},
          {"runs_per_edge", p.runs_per_edge},
          {"splat_sigma", p.splat_sigma}};
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string dataset, out;
  int runs = 10;
  double step = 4.0, sigma = 3.0;
};

int cmd_simulate(const Common& c, const SimulateArgs& a) {
  const ServerConfig cfg = resolve_config(c);
  const std::uint64_t seed = effective_seed(c, cfg);
  const fs::path dataset = a.dataset.empty() ? cfg.dataset : fs::path(a.dataset);
  if (dataset.empty() || !fs::is_directory(dataset)) throw InputError("dataset directory not found: " + dataset.string());
  const BiRrtParams params = rrt_params(a.runs, a.step, a.sigma);
  const auto manifests = list_manifests(dataset);
  fs::create_directories(a.out);

  std::vector<json> failures(manifests.size());
  std::vector<std::string> ids(manifests.size());
  std::mutex log;
  parallel_for(manifests.size(), c.jobs, [&](std::size_t i) {
    try {
      RasterFloorplan fp = load_floorplan(manifests[i]);
      validate(fp);
      ids[i] = fp.id;
      const auto e = simulate_entry(fp, params, seed);
      save_activity_png(e.sim.map, fs::path(a.out) / (fp.id + "_activity.png"));
      const json doc = {{"id", fp.id},
                        {"seed", entry_seed(seed, fp.id)},
                        {"furniture", furniture_list_json(e.furniture)},
                        {"edges_total", e.sim.edges_total},
                        {"edges_solved", e.sim.edges_solved},
                        {"warnings", e.sim.warnings}};
      write_text(fs::path(a.out) / (fp.id + "_furniture.json"), doc.dump(2) + "\n");
    } catch (const std::exception& e) {
      failures[i] = {{"manifest", manifests[i].filename().string()}, {"error", e.what()}};
      std::lock_guard g(log);
      std::cerr << "skipped " << manifests[i].filename().string() << ": " << e.what() << '\n';
    }
  });

  json failed = json::array();
  for (auto& f : failures)
    if (!f.is_null()) failed.push_back(f);
  const json run = {{"command", "simulate"},
                    {"inputs", {{"dataset", dataset.string()}}},
                    {"output", a.out},
                    {"seed", seed},
                    {"parameters", params_json(params)},
                    {"entries", manifests.size()},
                    {"failures", failed}};
  write_text(fs::path(a.out) / "run.json", run.dump(2) + "\n");
  std::cerr << manifests.size() - failed.size() << "/" << manifests.size() << " simulated\n";
  return failed.size() * 100 > manifests.size() ? kExitPipeline : kExitOk;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string boundary, activity, out, generator, dataset, activity_dir;
  std::size_t k = 10;
};

BoundaryImage read_boundary(const fs::path& p) {
  try {
    if (p.extension() == ".json" || fs::is_directory(p)) return extract_boundary(load_floorplan(p));
    return boundary_from_rgb(read_png(p));
  } catch (const Error& e) {
    throw InputError(std::string("bad boundary: ") + e.what());
  }
}

ActivityMap read_activity(const fs::path& p) {
  try {
    if (p.extension() == ".f32" || p.extension() == ".bin") return load_activity_f32(p);
    return load_activity_png(p);
  } catch (const Error& e) {
    throw InputError(std::string("bad activity map: ") + e.what());
  }
}

int cmd_generate(const Common& c, const GenerateArgs& a) {
  const ServerConfig cfg = resolve_config(c);
  const std::uint64_t seed = effective_seed(c, cfg);
  BoundaryImage boundary = read_boundary(a.boundary);
  ActivityMap activity = read_activity(a.activity);
  if (!activity.density.same_size(boundary.inside)) throw InputError("boundary and activity map differ in size");
  const GeneratorInput input = GeneratorInput::make(std::move(boundary), std::move(activity));

  std::unique_ptr<Generator> gen;
  json gen_info;
  // Explicit --generator wins; otherwise a configured plugin; otherwise retrieval.
  std::string plugin;
  if (a.generator.starts_with("plugin:")) plugin = a.generator.substr(7);
  else if (a.generator.empty()) plugin = cfg.generator_plugin;
  else if (a.generator != "retrieval") throw InputError("--generator must be retrieval or plugin:CMD");
  if (!plugin.empty()) {
    gen = std::make_unique<PluginGenerator>(plugin);
    gen_info = {{"name", "plugin"}, {"command", plugin}};
  } else {
    const fs::path dataset = a.dataset.empty() ? cfg.dataset : fs::path(a.dataset);
    if (dataset.empty() || !fs::is_directory(dataset)) throw InputError("retrieval needs --dataset DIR");
    const fs::path act_dir = a.activity_dir.empty() ? (cfg.activity_dir.empty() ? dataset : cfg.activity_dir)
                                                    : fs::path(a.activity_dir);
    std::vector<std::string> skipped;
    auto index = std::make_shared<const DatasetIndex>(load_index(dataset, act_dir, seed, &skipped));
    for (const auto& s : skipped) std::cerr << "skipped " << s << '\n';
    if (index->empty()) throw InputError("dataset has no usable entries");
    gen = std::make_unique<RetrievalGenerator>(index, a.k);
    gen_info = {{"name", "retrieval"}, {"dataset", dataset.string()}, {"k", a.k}};
  }

  LabelImage category;
  VectorFloorplan vf;
  try {
    category = gen->generate(input, seed);
    if (!is_confined(category, input.boundary.inside))
      fail(ErrorCode::GeneratorFailure, "generator output is not confined to the boundary");
    vf = vectorize(category, input.activity);
  } catch (const Error& e) {
    std::cerr << "generation failed: " << e.what() << '\n';
    return kExitPipeline;
  }
  const SuccessReport rep = check_success(vf);

  fs::create_directories(a.out);
  write_png(fs::path(a.out) / "category.png", to_png(label_codes(category)));
  json doc = json::parse(export_json(vf));
  json failed = json::array();
  for (auto cond : rep.failed_conditions) failed.push_back(std::string(condition_name(cond)));
  doc["success"] = {{"ok", rep.ok}, {"failed_conditions", failed}};
  doc["run"] = {{"command", "generate"},
                {"inputs", {{"boundary", a.boundary}, {"activity", a.activity}}},
                {"output", a.out},
                {"seed", seed},
                {"generator", gen_info}};
  write_text(fs::path(a.out) / "floorplan.json", doc.dump(2) + "\n");
  write_text(fs::path(a.out) / "floorplan.svg", export_svg(vf));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string pred, gt, report;
};

std::map<std::string, fs::path> category_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir.string());
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.ends_with("_category.png")) out[name.substr(0, name.size() - 13)] = e.path();
  }
  return out;
}

int cmd_eval(const Common& c, const EvalArgs& a) {
  const auto pred = category_files(a.pred), gt = category_files(a.gt);
  std::vector<std::string> ids, unpaired;
  for (const auto& [id, _] : pred) (gt.count(id) ? ids : unpaired).push_back(id);
  for (const auto& [id, _] : gt)
    if (!pred.count(id)) unpaired.push_back(id);
  std::sort(unpaired.begin(), unpaired.end());

  std::vector<json> items(ids.size());
  parallel_for(ids.size(), c.jobs, [&](std::size_t i) {
    const std::string& id = ids[i];
    json item = {{"id", id}};
    try {
      const LabelImage p = labels_from_codes(read_gray_png(pred.at(id)));
      const LabelImage g = labels_from_codes(read_gray_png(gt.at(id)));
      const PixelError err = pixel_error(p, g);
      item["mse"] = err.mse;
      item["mae"] = err.mae;

      const fs::path pa = fs::path(a.pred) / (id + "_activity.png"), ga = fs::path(a.gt) / (id + "_activity.png");
      std::optional<ActivityMap> pact, gact;
      if (fs::exists(pa)) pact = load_activity_png(pa);
      if (fs::exists(ga)) gact = load_activity_png(ga);
      item["nmi"] = nullptr;
      if (pact && gact) {
        try {
          item["nmi"] = nmi(pact->density, gact->density);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::ZeroEntropy) throw;
        }
      }
      const ActivityMap act = pact ? *pact : gact ? *gact : ActivityMap{RealImage(p.width(), p.height(), 0.0)};
      SuccessReport rep;
      try {
        rep = check_success(vectorize(p, act));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoClosedRegion) throw;
        rep = {false, {SuccessCondition::ClosedRooms, SuccessCondition::BalancedTypes, SuccessCondition::LivingConnectivity}};
      }
      json failed = json::array();
      for (auto cond : rep.failed_conditions) failed.push_back(std::string(condition_name(cond)));
      item["success"] = rep.ok;
      item["failed_conditions"] = failed;
    } catch (const std::exception& e) {
      item["error"] = e.what();
      item["success"] = false;
    }
    items[i] = std::move(item);
  });

  double mse = 0, mae = 0, nmi_sum = 0;
  std::size_t scored = 0, nmi_n = 0, ok = 0;
  for (const auto& it : items) {
    if (it.contains("mse")) {
      mse += it["mse"].get<double>();
      mae += it["mae"].get<double>();
      ++scored;
    }
    if (it.contains("nmi") && !it["nmi"].is_null()) {
      nmi_sum += it["nmi"].get<double>();
      ++nmi_n;
    }
    ok += it["success"].get<bool>();
  }
  const json report = {
      {"run", {{"command", "eval"}, {"inputs", {{"pred", a.pred}, {"gt", a.gt}}}, {"seed", c.seed}}},
      {"items", items},
      {"aggregate",
       {{"count", items.size()},
        {"mse", scored ? json(mse / scored) : json(nullptr)},
        {"mae", scored ? json(mae / scored) : json(nullptr)},
        {"nmi_mean", nmi_n ? json(nmi_sum / nmi_n) : json(nullptr)},
        {"nmi_count", nmi_n},
        {"success", std::to_string(ok) + "/" + std::to_string(items.size())},
        {"success_rate", items.empty() ? json(nullptr) : json(static_cast<double>(ok) / items.size())}}},
      {"unpaired", unpaired}};
  write_text(a.report, report.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EloArgs {
  std::string matches, report;
  double k = 84.0, initial = 1000.0;
};

int cmd_elo(const Common&, const EloArgs& a) {
  std::ifstream in(a.matches);
  if (!in) throw InputError("cannot read " + a.matches);
  std::map<std::string, EloTable> tables;
  std::string line;
  std::size_t n = 0, applied = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string pa, pb, q;
    Outcome outcome;
    try {
      const json j = json::parse(line);
      pa = j.at("player_a").get<std::string>();
      pb = j.at("player_b").get<std::string>();
      const json& qj = j.at("question");
      q = qj.is_string() ? qj.get<std::string>() : qj.dump();
      const std::string o = j.at("outcome").get<std::string>();
      if (o == "AWins") outcome = Outcome::AWins;
      else if (o == "BWins") outcome = Outcome::BWins;
      else if (o == "Draw") outcome = Outcome::Draw;
      else throw std::invalid_argument("outcome");
      if (pa == pb) throw std::invalid_argument("self match");
    } catch (const std::exception&) {
      std::cerr << "MalformedLine: " << a.matches << ":" << n << '\n';
      return kExitInput;
    }
    auto [it, fresh] = tables.try_emplace(q);
    if (fresh) {
      it->second.k_factor = a.k;
      it->second.initial_rating = a.initial;
    }
    EloTable& t = it->second;
    if (!t.has(pa)) t = t.with_player(pa);
    if (!t.has(pb)) t = t.with_player(pb);
    t = elo_update(std::move(t), pa, pb, outcome);
    ++applied;
  }
  json questions = json::object();
  for (const auto& [q, t] : tables) {
    json ratings = json::object();
    for (const auto& [p, r] : t.ratings) ratings[p] = r;
    questions[q] = ratings;
  }
  const json report = {{"run", {{"command", "elo"}, {"inputs", {{"matches", a.matches}}}}},
                       {"k_factor", a.k},
                       {"initial_rating", a.initial},
                       {"matches_applied", applied},
                       {"questions", questions}};
  write_text(a.report, report.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct FixturesArgs {
  std::string out;
  int count = 20;
};

int cmd_fixtures(const Common& c, const FixturesArgs& a) {
  if (a.count < 0) throw InputError("--count must be nonnegative");
  fs::create_directories(a.out);
  for (int i = 0; i < a.count; ++i) {
    const RasterFloorplan fp = make_procedural_floorplan(c.seed + static_cast<std::uint64_t>(i));
    save_floorplan(fp, fs::path(a.out) / (fp.id + ".json"));
  }
  return kExitOk;
}

struct ServeArgs {
  std::string host, dataset;
  int port = -1;
};

int cmd_serve(const Common& c, const ServeArgs& a) {
  ServerConfig cfg = resolve_config(c);
  if (c.seed_given) cfg.seed = c.seed;
  if (!a.host.empty()) cfg.host = a.host;
  if (a.port >= 0) cfg.port = a.port;
  if (!a.dataset.empty()) cfg.dataset = a.dataset;
  return run_server(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"actfloor: activity-guided floorplan pipeline"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "random seed")->each([&](const std::string&) { common.seed_given = true; });
    sub->add_option("--jobs", common.jobs, "worker threads")->check(CLI::Range(1u, 256u));
    sub->add_option("--config", common.config, "key = value config file");
  };

  SimulateArgs sim;
  auto* s_sim = app.add_subcommand("simulate", "activity map and furniture for every floorplan in a dataset");
  s_sim->add_option("--dataset", sim.dataset, "directory of floorplan manifests");
  s_sim->add_option("--out", sim.out, "output directory")->required();
  s_sim->add_option("--runs", sim.runs, "paths simulated per graph edge")->check(CLI::PositiveNumber);
  s_sim->add_option("--step", sim.step, "tree step size in pixels");
  s_sim->add_option("--sigma", sim.sigma, "splat sigma in pixels");
  add_common(s_sim);

  GenerateArgs gen;
  auto* s_gen = app.add_subcommand("generate", "floorplan from a boundary and an activity map");
  s_gen->add_option("--boundary", gen.boundary, "RGB boundary PNG or floorplan manifest")->required();
  s_gen->add_option("--activity", gen.activity, "activity map (.png or .f32)")->required();
  s_gen->add_option("--out", gen.out, "output directory")->required();
  s_gen->add_option("--generator", gen.generator, "retrieval or plugin:CMD");
  s_gen->add_option("--dataset", gen.dataset, "dataset for retrieval");
  s_gen->add_option("--activity-dir", gen.activity_dir, "precomputed dataset activity maps");
  s_gen->add_option("--k", gen.k, "retrieval candidates ranked by activity")->check(CLI::PositiveNumber);
  add_common(s_gen);

  EvalArgs ev;
  auto* s_eval = app.add_subcommand("eval", "pixel error, NMI and vectorization success against ground truth");
  s_eval->add_option("--pred", ev.pred, "predicted *_category.png directory")->required();
  s_eval->add_option("--gt", ev.gt, "ground truth *_category.png directory")->required();
  s_eval->add_option("--report", ev.report, "JSON report path")->required();
  add_common(s_eval);

  EloArgs elo;
  auto* s_elo = app.add_subcommand("elo", "ratings from a line-delimited JSON match log");
  s_elo->add_option("--matches", elo.matches, "match log")->required();
  s_elo->add_option("--report", elo.report, "JSON report path")->required();
  s_elo->add_option("--k", elo.k, "K factor")->check(CLI::PositiveNumber);
  s_elo->add_option("--initial", elo.initial, "initial rating");
  add_common(s_elo);

  ServeArgs serve;
  auto* s_serve = app.add_subcommand("serve", "HTTP design service under /v1");
  s_serve->add_option("--host", serve.host);
  s_serve->add_option("--port", serve.port);
  s_serve->add_option("--dataset", serve.dataset);
  add_common(s_serve);

  FixturesArgs fix;
  auto* s_fix = app.add_subcommand("fixtures", "write procedural floorplans");
  s_fix->add_option("--out", fix.out, "output directory")->required();
  s_fix->add_option("--count", fix.count, "number of floorplans");
  add_common(s_fix);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*s_sim) return cmd_simulate(common, sim);
    if (*s_gen) return cmd_generate(common, gen);
    if (*s_eval) return cmd_eval(common, ev);
    if (*s_elo) return cmd_elo(common, elo);
    if (*s_serve) return cmd_serve(common, serve);
    if (*s_fix) return cmd_fixtures(common, fix);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPipeline;
  }
  return kExitInput;
}
