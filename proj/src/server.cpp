#include "actfloor/server.hpp"

#include <httplib.h>
#include <unistd.h>

#include <atomic>
#include <csignal>
#include <cstring>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "actfloor/grid.hpp"
#include "actfloor/json_io.hpp"
#include "actfloor/rng.hpp"

namespace actfloor {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const auto n = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "config: " + key + " must be a nonnegative integer");
  }
}

}  // namespace

ServerConfig parse_config(const std::string& text) {
  ServerConfig c;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos && line.find('"') > hash) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorCode::InvalidArgument, "config line " + std::to_string(n) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key == "dataset") c.dataset = value;
    else if (key == "activity_dir") c.activity_dir = value;
    else if (key == "generator_plugin") c.generator_plugin = value;
    else if (key == "activity_plugin") c.activity_plugin = value;
    else if (key == "seed") c.seed = parse_u64(value, key);
    else if (key == "host") c.host = value;
    else if (key == "port") c.port = static_cast<int>(parse_u64(value, key));
    else if (key == "snapshot_dir") c.snapshot_dir = value;
    else if (key == "retrieval_k") c.retrieval_k = parse_u64(value, key);
    else fail(ErrorCode::InvalidArgument, "config line " + std::to_string(n) + ": unknown key " + key);
  }
  if (c.retrieval_k < 1) fail(ErrorCode::InvalidArgument, "config: retrieval_k must be >= 1");
  return c;
}

ServerConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoFailure, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_env_overrides(ServerConfig& config) {
  if (const char* d = std::getenv("ACTFLOOR_DATASET"); d && *d) config.dataset = d;
}

// ---------------------------------------------------------------------------
// Base64

namespace {
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    const std::uint32_t v = std::uint32_t(bytes[i]) << 16 | (i + 1 < bytes.size() ? std::uint32_t(bytes[i + 1]) << 8 : 0) |
                            (i + 2 < bytes.size() ? bytes[i + 2] : 0);
    out += kAlphabet[v >> 18 & 63];
    out += kAlphabet[v >> 12 & 63];
    out += i + 1 < bytes.size() ? kAlphabet[v >> 6 & 63] : '=';
    out += i + 2 < bytes.size() ? kAlphabet[v & 63] : '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  std::vector<std::uint8_t> out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    const char* p = std::strchr(kAlphabet, c);
    if (!p || !*p) fail(ErrorCode::InvalidArgument, "invalid base64 character");
    acc = acc << 6 | static_cast<std::uint32_t>(p - kAlphabet);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>(acc >> bits & 0xff));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Service

DesignService::DesignService(ServerConfig config, std::shared_ptr<const DatasetIndex> index)
    : config_(std::move(config)), index_(std::move(index)) {}

std::shared_ptr<Session> DesignService::find(const std::string& id) const {
  std::shared_lock guard(sessions_lock_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ApiError(404, "UnknownSession", "no session " + id);
  return it->second;
}

RasterFloorplan DesignService::provisional_layout(const BoundaryImage& boundary) const {
  LabelImage category;
  if (has_index()) {
    // k = 1 ranks on the boundary alone, so the activity map is irrelevant.
    const ActivityMap blank{RealImage(boundary.width(), boundary.height(), 0.0)};
    category = retrieval_generate(GeneratorInput::make(boundary, blank), *index_, 1);
  } else {
    category = LabelImage(boundary.width(), boundary.height(), RoomLabel::Outside);
    for (std::size_t i = 0; i < category.size(); ++i) {
      if (!boundary.inside.pixels()[i]) continue;
      category.pixels()[i] = boundary.entrance.pixels()[i]   ? RoomLabel::MainEntrance
                             : boundary.boundary.pixels()[i] ? RoomLabel::Wall
                                                             : RoomLabel::Living;
    }
  }
  return assemble_floorplan("provisional", category);
}

std::string DesignService::create_session(const BoundaryImage& boundary) {
  try {
    validate_boundary(boundary);
  } catch (const Error& e) {
    throw ApiError(400, "BadBoundary", e.what());
  }
  auto s = std::make_shared<Session>();
  s->boundary = boundary;
  s->provisional = provisional_layout(boundary);
  std::unique_lock guard(sessions_lock_);
  char buf[24];
  std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(next_session_++));
  s->id = buf;
  sessions_[s->id] = s;
  return s->id;
}

std::string DesignService::create_session_from_png(std::span<const std::uint8_t> png) {
  BoundaryImage b;
  try {
    b = boundary_from_rgb(decode_png(png));
  } catch (const Error& e) {
    throw ApiError(400, "BadBoundary", e.what());
  }
  return create_session(b);
}

std::vector<std::string> DesignService::session_ids() const {
  std::shared_lock guard(sessions_lock_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

std::vector<Recommendation> DesignService::recommendations(const std::string& id, std::size_t top) {
  auto s = find(id);
  if (!has_index()) throw ApiError(503, "IndexNotLoaded", "no dataset index loaded");
  Mask inside;
  {
    std::lock_guard guard(s->lock);
    inside = s->boundary.inside;
  }
  std::vector<Recommendation> out;
  for (const auto& m : index_->rank(inside, top))
    out.push_back({(*index_)[m.entry].id, m.distance, (*index_)[m.entry].furniture.size()});
  return out;
}

namespace {

bool fits_boundary(const BoundaryImage& b, const Rect& r) {
  if (r.empty() || r.x < 0 || r.y < 0 || r.right() > b.width() || r.bottom() > b.height()) return false;
  for (int y = r.y; y < r.bottom(); ++y)
    for (int x = r.x; x < r.right(); ++x)
      if (!b.inside(x, y) || b.boundary(x, y)) return false;
  return true;
}

}  // namespace

FurnitureInstance DesignService::make_instance(const Session& s, FurnitureKind kind, const Rect& rect) const {
  FurnitureInstance f{kind, rect, host_room_at(s.provisional, rect), {}};
  if (f.room_id > 0) {
    try {
      f.entrance = synthesize_room_entrance(f.room_id, s.provisional, rect);
      return f;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSharedWall) throw;
    }
    for (const auto& room : room_regions(s.provisional))
      if (room.id == f.room_id)
        if (auto door = find_room_doorway(s.provisional, room)) {
          f.entrance = door->entrance;
          return f;
        }
  }
  f.room_id = 0;
  f.entrance = main_entrance_point(s.provisional);
  return f;
}

std::vector<PlacedFurniture> DesignService::apply_recommendation(const std::string& id, const std::string& entry) {
  auto s = find(id);
  if (!has_index()) throw ApiError(503, "IndexNotLoaded", "no dataset index loaded");
  const auto idx = index_->find(entry);
  if (!idx) throw ApiError(404, "UnknownEntry", "no dataset entry " + entry);
  const IndexEntry& e = (*index_)[*idx];
  std::lock_guard guard(s->lock);
  const Rect sb = bounding_box(e.boundary.inside), qb = bounding_box(s->boundary.inside);
  std::vector<PlacedFurniture> next;
  int next_id = s->next_furniture_id;
  for (const auto& f : e.furniture) {
    const double fx = static_cast<double>(qb.w) / sb.w, fy = static_cast<double>(qb.h) / sb.h;
    const int x0 = qb.x + static_cast<int>(std::lround((f.rect.x - sb.x) * fx));
    const int y0 = qb.y + static_cast<int>(std::lround((f.rect.y - sb.y) * fy));
    const int x1 = qb.x + static_cast<int>(std::lround((f.rect.right() - sb.x) * fx));
    const int y1 = qb.y + static_cast<int>(std::lround((f.rect.bottom() - sb.y) * fy));
    const Rect r{x0, y0, x1 - x0, y1 - y0};
    if (!fits_boundary(s->boundary, r)) continue;
    next.push_back({next_id++, make_instance(*s, f.kind, r)});
  }
  s->furniture = std::move(next);
  s->next_furniture_id = next_id;
  s->activity.reset();
  s->last_result.reset();
  return s->furniture;
}

std::vector<PlacedFurniture> DesignService::furniture_command(const std::string& id, const FurnitureCommand& cmd) {
  auto s = find(id);
  std::lock_guard guard(s->lock);
  auto it = std::find_if(s->furniture.begin(), s->furniture.end(), [&](const auto& p) { return p.id == cmd.id; });
  if (cmd.op != FurnitureCommand::Op::Add && it == s->furniture.end())
    throw ApiError(404, "UnknownInstance", "no furniture instance " + std::to_string(cmd.id));
  if (cmd.op != FurnitureCommand::Op::Remove && !fits_boundary(s->boundary, cmd.rect))
    throw ApiError(409, "OutOfBoundary", "furniture rectangle leaves the boundary");
  switch (cmd.op) {
    case FurnitureCommand::Op::Add:
      s->furniture.push_back({s->next_furniture_id++, make_instance(*s, cmd.kind, cmd.rect)});
      break;
    case FurnitureCommand::Op::Move:
      it->item = make_instance(*s, it->item.kind, cmd.rect);
      break;
    case FurnitureCommand::Op::Remove:
      s->furniture.erase(it);
      break;
  }
  s->activity.reset();
  s->last_result.reset();
  return s->furniture;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

ActivityMap run_activity_plugin(const std::string& command, const BoundaryImage& b, std::uint64_t seed) {
  static std::atomic<unsigned> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("actfloor_activity_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::create_directories(dir);
  struct Cleanup {
    fs::path p;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(p, ec);
    }
  } cleanup{dir};
  write_png(dir / "boundary.png", boundary_to_rgb(b));
  const fs::path out = dir / "activity.png";
  const std::string cmd = command + " " + shell_quote(dir.string()) + " " + shell_quote(out.string()) + " " +
                          std::to_string(seed);
  if (std::system(cmd.c_str()) != 0 || !fs::exists(out))
    throw ApiError(500, "GeneratorFailure", "activity plugin failed");
  ActivityMap m;
  try {
    m = load_activity_png(out);
  } catch (const Error& e) {
    throw ApiError(500, "GeneratorFailure", std::string("activity plugin output unreadable: ") + e.what());
  }
  if (!m.density.same_size(b.inside)) throw ApiError(500, "GeneratorFailure", "activity plugin output has the wrong size");
  for (std::size_t i = 0; i < m.density.size(); ++i)
    if (!b.inside.pixels()[i]) m.density.pixels()[i] = 0.0;
  return m;
}

}  // namespace

ActivityResult DesignService::synthesize_activity(const std::string& id, SessionMode mode, std::uint64_t seed,
                                                  int samples) {
  if (samples < 1 || samples > 16) throw ApiError(400, "BadRequest", "samples must be in [1, 16]");
  auto s = find(id);
  std::lock_guard guard(s->lock);
  ActivityResult out;
  for (int k = 0; k < samples; ++k) {
    const std::uint64_t sample_seed = k == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(k));
    if (mode == SessionMode::Auto && !config_.activity_plugin.empty()) {
      out.maps.push_back(run_activity_plugin(config_.activity_plugin, s->boundary, sample_seed));
      continue;
    }
    std::vector<FurnitureInstance> furniture;
    if (mode == SessionMode::Manual) {
      for (const auto& p : s->furniture) furniture.push_back(p.item);
      if (furniture.empty()) throw ApiError(422, "NoConnectivity", "place at least one furniture piece first");
    } else {
      try {
        furniture = place_primary_furniture(s->provisional, PlacementPolicy::defaults(), derive_seed(sample_seed, 1));
      } catch (const Error& e) {
        throw ApiError(422, "NoConnectivity", std::string("automatic furnishing failed: ") + e.what());
      }
      if (furniture.empty()) throw ApiError(422, "NoConnectivity", "provisional layout has no furnishable rooms");
    }
    try {
      auto sim = simulate_activity(s->provisional, furniture, BiRrtParams{}, derive_seed(sample_seed, 2));
      out.maps.push_back(std::move(sim.map));
      out.warnings.insert(out.warnings.end(), sim.warnings.begin(), sim.warnings.end());
      if (k == 0) out.furniture_used = furniture;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AllEdgesUnsolvable && e.code() != ErrorCode::NoEntrance) throw;
      throw ApiError(422, "NoConnectivity", e.what());
    }
  }
  s->mode = mode;
  s->activity = out.maps.front();
  s->last_result.reset();
  return out;
}

GenerationResult DesignService::generate(const std::string& id, std::uint64_t seed) {
  auto s = find(id);
  std::lock_guard guard(s->lock);
  if (!s->activity) throw ApiError(422, "MissingActivity", "synthesize an activity map first");
  std::unique_ptr<Generator> gen;
  if (!config_.generator_plugin.empty()) gen = std::make_unique<PluginGenerator>(config_.generator_plugin);
  else if (has_index()) gen = std::make_unique<RetrievalGenerator>(index_, config_.retrieval_k);
  else throw ApiError(503, "IndexNotLoaded", "no dataset index loaded and no generator plugin configured");

  GenerationResult r;
  try {
    r.category = gen->generate(GeneratorInput::make(s->boundary, *s->activity), seed);
  } catch (const Error& e) {
    throw ApiError(500, "GeneratorFailure", e.what());
  }
  if (!is_confined(r.category, s->boundary.inside))
    throw ApiError(500, "GeneratorFailure", "generator output is not confined to the boundary");
  try {
    r.vector = vectorize(r.category, *s->activity);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoClosedRegion) throw;
    r.vector = VectorFloorplan{r.category.width(), r.category.height(), {}, {}, {}, entrance_segment(r.category)};
  }
  r.report = check_success(r.vector);
  r.svg = export_svg(r.vector);
  s->last_result = r;
  return r;
}

namespace {

json furniture_state(const std::vector<PlacedFurniture>& list) {
  json out = json::array();
  for (const auto& p : list) {
    json f = furniture_json(p.item);
    f["id"] = p.id;
    out.push_back(std::move(f));
  }
  return out;
}

const char* mode_name(SessionMode m) { return m == SessionMode::Auto ? "Auto" : "Manual"; }

json report_json(const SuccessReport& r) {
  json failed = json::array();
  for (auto c : r.failed_conditions) failed.push_back(std::string(condition_name(c)));
  return {{"ok", r.ok}, {"failed_conditions", failed}};
}

}  // namespace

void DesignService::snapshot(const fs::path& dir) const {
  std::vector<std::shared_ptr<Session>> all;
  {
    std::shared_lock guard(sessions_lock_);
    for (const auto& [_, s] : sessions_) all.push_back(s);
  }
  for (const auto& s : all) {
    std::lock_guard guard(s->lock);
    const fs::path d = dir / s->id;
    fs::create_directories(d);
    write_png(d / "boundary.png", boundary_to_rgb(s->boundary));
    if (s->activity) save_activity_png(*s->activity, d / "activity.png");
    const json doc = {{"id", s->id},
                      {"mode", mode_name(s->mode)},
                      {"furniture", furniture_state(s->furniture)},
                      {"has_activity", s->activity.has_value()}};
    std::ofstream(d / "session.json") << doc.dump(2) << '\n';
  }
}

// ---------------------------------------------------------------------------
// HTTP

struct ApiServer::Impl {
  std::shared_ptr<DesignService> service;
  httplib::Server http;
};

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& reason, const std::string& message) {
  send_json(res, status, {{"error", reason}, {"message", message}});
}

std::uint64_t query_u64(const httplib::Request& req, const char* key, std::uint64_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string v = req.get_param_value(key);
  try {
    std::size_t used = 0;
    const auto n = std::stoull(v, &used);
    if (used == v.size()) return n;
  } catch (const std::exception&) {
  }
  throw ApiError(400, "BadRequest", std::string(key) + " must be a nonnegative integer");
}

bool wants_png(const httplib::Request& req) {
  return req.get_header_value("Accept").find("image/png") != std::string::npos;
}

template <class Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const ApiError& e) {
      send_error(res, e.status(), e.reason(), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "BadRequest", e.what());
    } catch (const Error& e) {
      const bool input = e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::SizeMismatch;
      send_error(res, input ? 400 : 500, std::string(to_string(e.code())), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  };
}

}  // namespace

ApiServer::ApiServer(std::shared_ptr<DesignService> service) : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  auto& http = impl_->http;
  DesignService& svc = *impl_->service;

  http.Get("/v1/health", guarded([&svc](const httplib::Request&, httplib::Response& res) {
             send_json(res, 200, {{"status", "ok"}, {"index_loaded", svc.has_index()}});
           }));

  http.Post("/v1/sessions", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
              std::string id;
              if (req.get_header_value("Content-Type").find("image/png") != std::string::npos) {
                const auto* p = reinterpret_cast<const std::uint8_t*>(req.body.data());
                id = svc.create_session_from_png({p, req.body.size()});
              } else {
                json body;
                try {
                  body = json::parse(req.body);
                } catch (const json::exception&) {
                  throw ApiError(400, "BadBoundary", "body must be a PNG or JSON with boundary_png");
                }
                if (!body.contains("boundary_png") || !body["boundary_png"].is_string())
                  throw ApiError(400, "BadBoundary", "missing boundary_png");
                std::vector<std::uint8_t> png;
                try {
                  png = base64_decode(body["boundary_png"].get<std::string>());
                } catch (const Error& e) {
                  throw ApiError(400, "BadBoundary", e.what());
                }
                id = svc.create_session_from_png(png);
              }
              send_json(res, 201, {{"id", id}, {"mode", "Manual"}, {"furniture", json::array()}});
            }));

  http.Get(R"(/v1/sessions/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
             const json state = svc.with_session(req.matches[1], [](Session& s) {
               return json{{"id", s.id},
                           {"mode", mode_name(s.mode)},
                           {"furniture", furniture_state(s.furniture)},
                           {"has_activity", s.activity.has_value()},
                           {"has_result", s.last_result.has_value()}};
             });
             send_json(res, 200, state);
           }));

  http.Get(R"(/v1/sessions/([^/]+)/recommendations)",
           guarded([&svc](const httplib::Request& req, httplib::Response& res) {
             const auto top = query_u64(req, "top", 10);
             json list = json::array();
             for (const auto& r : svc.recommendations(req.matches[1], top))
               list.push_back({{"entry", r.entry}, {"distance", r.distance}, {"furniture_count", r.furniture_count}});
             send_json(res, 200, {{"recommendations", list}});
           }));

  http.Post(R"(/v1/sessions/([^/]+)/recommendations/([^/]+)/apply)",
            guarded([&svc](const httplib::Request& req, httplib::Response& res) {
              const auto list = svc.apply_recommendation(req.matches[1], req.matches[2]);
              send_json(res, 200, {{"furniture", furniture_state(list)}});
            }));

  http.Post(R"(/v1/sessions/([^/]+)/furniture)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
              const json body = json::parse(req.body);
              FurnitureCommand cmd;
              const std::string op = body.at("op").get<std::string>();
              if (op == "add") {
                cmd.op = FurnitureCommand::Op::Add;
                const auto kind = furniture_from_name(body.at("kind").get<std::string>());
                if (!kind) throw ApiError(400, "BadRequest", "unknown furniture kind");
                cmd.kind = *kind;
              } else if (op == "move") {
                cmd.op = FurnitureCommand::Op::Move;
              } else if (op == "remove") {
                cmd.op = FurnitureCommand::Op::Remove;
              } else {
                throw ApiError(400, "BadRequest", "op must be add, move or remove");
              }
              if (cmd.op != FurnitureCommand::Op::Add) cmd.id = body.at("id").get<int>();
              if (cmd.op != FurnitureCommand::Op::Remove) {
                try {
                  cmd.rect = rect_from_json(body.at("rect"));
                } catch (const Error& e) {
                  throw ApiError(400, "BadRequest", e.what());
                }
              }
              const auto list = svc.furniture_command(req.matches[1], cmd);
              send_json(res, 200, {{"furniture", furniture_state(list)}});
            }));

  http.Post(R"(/v1/sessions/([^/]+)/activity)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
              const std::string mode = req.has_param("mode") ? req.get_param_value("mode") : "manual";
              if (mode != "manual" && mode != "auto") throw ApiError(400, "BadRequest", "mode must be manual or auto");
              const auto seed = query_u64(req, "seed", svc.config().seed);
              const auto samples = query_u64(req, "samples", 1);
              const auto result = svc.synthesize_activity(
                  req.matches[1], mode == "auto" ? SessionMode::Auto : SessionMode::Manual, seed,
                  static_cast<int>(std::min<std::uint64_t>(samples, 1000)));
              if (wants_png(req)) {
                const auto png = encode_activity_png(result.maps.front());
                res.status = 200;
                res.set_content(std::string(png.begin(), png.end()), "image/png");
                return;
              }
              json maps = json::array();
              for (const auto& m : result.maps) maps.push_back(base64_encode(encode_activity_png(m)));
              send_json(res, 200,
                        {{"activity_png", maps.front()},
                         {"samples", maps},
                         {"furniture_used", furniture_list_json(result.furniture_used)},
                         {"warnings", result.warnings}});
            }));

  http.Post(R"(/v1/sessions/([^/]+)/generate)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
              const auto seed = query_u64(req, "seed", svc.config().seed);
              const auto r = svc.generate(req.matches[1], seed);
              const auto png = encode_png(to_png(label_codes(r.category)));
              send_json(res, 200,
                        {{"category_png", base64_encode(png)},
                         {"vector", json::parse(export_json(r.vector))},
                         {"svg", r.svg},
                         {"success", report_json(r.report)}});
            }));
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  if (!impl_->http.bind_to_port(host, port)) fail(ErrorCode::IoFailure, "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ApiServer::listen() { impl_->http.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_) impl_->http.stop();
}

namespace {
std::atomic<bool> g_stop_requested{false};
extern "C" void on_signal(int) { g_stop_requested = true; }
}  // namespace

int run_server(const ServerConfig& config) {
  std::shared_ptr<const DatasetIndex> index;
  if (!config.dataset.empty()) {
    std::vector<std::string> skipped;
    index = std::make_shared<const DatasetIndex>(load_index(config.dataset, config.activity_dir, config.seed, &skipped));
    for (const auto& s : skipped) std::cerr << "skipped " << s << '\n';
    std::cerr << "index: " << index->size() << " entries\n";
  }
  auto service = std::make_shared<DesignService>(config, index);
  ApiServer server(service);
  const int port = server.bind(config.host, config.port);
  std::cerr << "listening on " << config.host << ':' << port << '\n';

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::thread watcher([&] {
    while (!g_stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  });
  server.listen();
  g_stop_requested = true;
  watcher.join();
  if (!config.snapshot_dir.empty()) service->snapshot(config.snapshot_dir);
  return 0;
}

}  // namespace actfloor
