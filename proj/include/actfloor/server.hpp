#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "actfloor/genlab.hpp"
#include "actfloor/vectorize.hpp"

namespace actfloor {

/// key = value lines; '#' starts a comment; values may be double-quoted.
struct ServerConfig {
  std::filesystem::path dataset;
  std::filesystem::path activity_dir;  // precomputed maps for the dataset, optional
  std::string generator_plugin;        // external generator command, optional
  std::string activity_plugin;         // external automatic activity command, optional
  std::uint64_t seed = 0;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path snapshot_dir;  // sessions written here on shutdown, optional
  std::size_t retrieval_k = 10;
};

ServerConfig parse_config(const std::string& text);
ServerConfig load_config(const std::filesystem::path& path);
/// ACTFLOOR_DATASET overrides `dataset` when set.
void apply_env_overrides(ServerConfig& config);

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws InvalidArgument on characters outside the standard alphabet.
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Failure with an HTTP status and a short machine-readable reason.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string reason, const std::string& message)
      : std::runtime_error(message), status_(status), reason_(std::move(reason)) {}
  int status() const { return status_; }
  const std::string& reason() const { return reason_; }

 private:
  int status_;
  std::string reason_;
};

enum class SessionMode { Manual, Auto };

struct PlacedFurniture {
  int id = 0;
  FurnitureInstance item;
};

struct GenerationResult {
  LabelImage category;
  VectorFloorplan vector;
  SuccessReport report;
  std::string svg;
};

struct Session {
  std::string id;
  BoundaryImage boundary;
  RasterFloorplan provisional;  // room partition used for entrances and auto mode
  std::vector<PlacedFurniture> furniture;
  int next_furniture_id = 1;
  SessionMode mode = SessionMode::Manual;
  std::optional<ActivityMap> activity;
  std::optional<GenerationResult> last_result;
  mutable std::mutex lock;
};

struct Recommendation {
  std::string entry;
  double distance = 0.0;
  std::size_t furniture_count = 0;
};

struct FurnitureCommand {
  enum class Op { Add, Move, Remove } op = Op::Add;
  FurnitureKind kind = FurnitureKind::Bed;
  Rect rect;
  int id = 0;
};

struct ActivityResult {
  std::vector<ActivityMap> maps;  // first one is stored on the session
  std::vector<FurnitureInstance> furniture_used;
  std::vector<std::string> warnings;
};

/// Session logic behind the HTTP API. Different sessions can be used from
/// different threads at once; calls on one session are serialized.
class DesignService {
 public:
  DesignService(ServerConfig config, std::shared_ptr<const DatasetIndex> index);

  const ServerConfig& config() const { return config_; }
  bool has_index() const { return index_ && !index_->empty(); }

  /// 400 BadBoundary on invalid input.
  std::string create_session(const BoundaryImage& boundary);
  std::string create_session_from_png(std::span<const std::uint8_t> png);

  /// Runs `fn(session)` under the session's lock; 404 UnknownSession.
  template <class Fn>
  auto with_session(const std::string& id, Fn&& fn) {
    std::shared_ptr<Session> s = find(id);
    std::lock_guard guard(s->lock);
    return fn(*s);
  }

  std::vector<Recommendation> recommendations(const std::string& id, std::size_t top);
  /// Replaces the furniture with the entry's pieces scaled onto the session
  /// boundary; pieces that no longer fit are dropped.
  std::vector<PlacedFurniture> apply_recommendation(const std::string& id, const std::string& entry);
  /// 409 OutOfBoundary, 404 UnknownInstance; the state is unchanged on error.
  std::vector<PlacedFurniture> furniture_command(const std::string& id, const FurnitureCommand& cmd);
  /// 422 NoConnectivity when nothing can be simulated.
  ActivityResult synthesize_activity(const std::string& id, SessionMode mode, std::uint64_t seed, int samples);
  /// 422 MissingActivity, 500 GeneratorFailure, 503 IndexNotLoaded.
  GenerationResult generate(const std::string& id, std::uint64_t seed);

  std::vector<std::string> session_ids() const;
  /// Writes boundary.png, activity.png (if any) and session.json per session.
  void snapshot(const std::filesystem::path& dir) const;

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  RasterFloorplan provisional_layout(const BoundaryImage& boundary) const;
  FurnitureInstance make_instance(const Session& s, FurnitureKind kind, const Rect& rect) const;

  ServerConfig config_;
  std::shared_ptr<const DatasetIndex> index_;
  mutable std::shared_mutex sessions_lock_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_session_ = 1;
};

/// HTTP front end for DesignService under /v1.
class ApiServer {
 public:
  explicit ApiServer(std::shared_ptr<DesignService> service);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds (port 0 picks a free port) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Loads the index named by the config (if any) and serves until stopped.
int run_server(const ServerConfig& config);

}  // namespace actfloor
