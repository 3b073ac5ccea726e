#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <thread>

#include "actfloor/grid.hpp"
#include "actfloor/server.hpp"
#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"

using namespace actfloor;
using json = nlohmann::json;

namespace {

// One HTTP server on a free port, served from a background thread.
class Running {
 public:
  explicit Running(std::shared_ptr<const DatasetIndex> index) {
    ServerConfig cfg;
    cfg.seed = 7;
    service_ = std::make_shared<DesignService>(cfg, std::move(index));
    server_ = std::make_unique<ApiServer>(service_);
    port_ = server_->bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_->listen(); });
    httplib::Client probe("127.0.0.1", port_);
    for (int i = 0; i < 200 && !probe.Get("/v1/health"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ~Running() {
    server_->stop();
    thread_.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(120, 0);
    return c;
  }

 private:
  std::shared_ptr<DesignService> service_;
  std::unique_ptr<ApiServer> server_;
  int port_ = 0;
  std::thread thread_;
};

std::string boundary_png(const BoundaryImage& b) {
  const auto bytes = encode_png(boundary_to_rgb(b));
  return {bytes.begin(), bytes.end()};
}

std::string boundary_png(std::uint64_t plan_seed) { return boundary_png(extract_boundary(make_procedural_floorplan(plan_seed))); }

std::string create(httplib::Client& c, const std::string& png) {
  auto r = c.Post("/v1/sessions", png, "image/png");
  EXPECT_TRUE(r);
  EXPECT_EQ(r->status, 201) << r->body;
  return json::parse(r->body).at("id").get<std::string>();
}

// A rectangle well inside the footprint: the centre of the inside bbox.
json centre_rect(std::uint64_t plan_seed, int size = 12) {
  const Rect bb = bounding_box(make_procedural_floorplan(plan_seed).inside);
  return {bb.x + bb.w / 2 - size / 2, bb.y + bb.h / 2 - size / 2, size, size};
}

httplib::Result add_piece(httplib::Client& c, const std::string& id, const json& rect, const std::string& kind = "Bed") {
  return c.Post("/v1/sessions/" + id + "/furniture", json{{"op", "add"}, {"kind", kind}, {"rect", rect}}.dump(),
                "application/json");
}

std::size_t furniture_count(httplib::Client& c, const std::string& id) {
  return json::parse(c.Get("/v1/sessions/" + id)->body).at("furniture").size();
}

std::string error_reason(const httplib::Result& r) { return json::parse(r->body).at("error").get<std::string>(); }

Running& with_index() {
  static Running r(testing_support::shared_index());
  return r;
}

}  // namespace

TEST(Api, HealthAndSessionCreation) {
  auto c = with_index().client();
  auto h = c.Get("/v1/health");
  ASSERT_TRUE(h);
  EXPECT_EQ(h->status, 200);
  EXPECT_TRUE(json::parse(h->body).at("index_loaded").get<bool>());

  const auto a = create(c, boundary_png(1));
  const auto b = create(c, boundary_png(1));
  EXPECT_NE(a, b);
  auto s = c.Get("/v1/sessions/" + a);
  EXPECT_EQ(s->status, 200);
  EXPECT_EQ(json::parse(s->body).at("mode"), "Manual");

  const auto as_json = json{{"boundary_png", base64_encode(encode_png(boundary_to_rgb(
                                                extract_boundary(make_procedural_floorplan(2)))))}};
  EXPECT_EQ(c.Post("/v1/sessions", as_json.dump(), "application/json")->status, 201);
}

TEST(Api, BadBoundaryIs400) {
  auto c = with_index().client();
  auto b = extract_boundary(make_procedural_floorplan(1));
  b.boundary(set_pixels(b.boundary)[0].x, set_pixels(b.boundary)[0].y) = 0;  // open ring
  auto r = c.Post("/v1/sessions", boundary_png(b), "image/png");
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(error_reason(r), "BadBoundary");
  EXPECT_EQ(c.Post("/v1/sessions", "not a png", "image/png")->status, 400);
  EXPECT_EQ(c.Post("/v1/sessions", "{}", "application/json")->status, 400);
}

TEST(Api, UnknownSessionIs404) {
  auto c = with_index().client();
  auto r = c.Get("/v1/sessions/nope");
  EXPECT_EQ(r->status, 404);
  EXPECT_EQ(error_reason(r), "UnknownSession");
  EXPECT_EQ(c.Post("/v1/sessions/nope/generate", "", "application/json")->status, 404);
}

TEST(Api, RecommendationsRankedByShape) {
  auto c = with_index().client();
  const auto& entry = (*testing_support::shared_index())[0];
  const auto id = create(c, boundary_png(entry.boundary));
  auto r = c.Get("/v1/sessions/" + id + "/recommendations?top=3");
  ASSERT_EQ(r->status, 200);
  const auto list = json::parse(r->body).at("recommendations");
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[0].at("entry"), entry.id);
  EXPECT_EQ(list[0].at("distance").get<double>(), 0.0);
  for (std::size_t i = 1; i < list.size(); ++i)
    EXPECT_LE(list[i - 1].at("distance").get<double>(), list[i].at("distance").get<double>());

  auto applied = c.Post("/v1/sessions/" + id + "/recommendations/" + entry.id + "/apply", "", "application/json");
  ASSERT_EQ(applied->status, 200);
  EXPECT_EQ(json::parse(applied->body).at("furniture").size(), entry.furniture.size());
  EXPECT_EQ(c.Post("/v1/sessions/" + id + "/recommendations/zzz/apply", "", "application/json")->status, 404);
}

TEST(Api, FurnitureEditsAreAtomic) {
  auto c = with_index().client();
  const auto id = create(c, boundary_png(3));
  auto ok = add_piece(c, id, centre_rect(3));
  ASSERT_EQ(ok->status, 200) << ok->body;
  const int piece = json::parse(ok->body).at("furniture")[0].at("id").get<int>();

  auto out = add_piece(c, id, json{0, 0, 10, 10});
  EXPECT_EQ(out->status, 409);
  EXPECT_EQ(error_reason(out), "OutOfBoundary");
  EXPECT_EQ(furniture_count(c, id), 1u);

  const auto before = json::parse(c.Get("/v1/sessions/" + id)->body).at("furniture");
  auto move = c.Post("/v1/sessions/" + id + "/furniture", json{{"op", "move"}, {"id", piece}, {"rect", {250, 250, 20, 20}}}.dump(),
                     "application/json");
  EXPECT_EQ(move->status, 409);
  EXPECT_EQ(json::parse(c.Get("/v1/sessions/" + id)->body).at("furniture"), before);

  const auto remove = json{{"op", "remove"}, {"id", piece}}.dump();
  EXPECT_EQ(c.Post("/v1/sessions/" + id + "/furniture", remove, "application/json")->status, 200);
  auto again = c.Post("/v1/sessions/" + id + "/furniture", remove, "application/json");
  EXPECT_EQ(again->status, 404);
  EXPECT_EQ(error_reason(again), "UnknownInstance");
  EXPECT_EQ(add_piece(c, id, centre_rect(3), "Sofa")->status, 400);
}

TEST(Api, EmptyManualSessionHasNoConnectivity) {
  auto c = with_index().client();
  const auto id = create(c, boundary_png(4));
  auto r = c.Post("/v1/sessions/" + id + "/activity?mode=manual", "", "application/json");
  EXPECT_EQ(r->status, 422);
  EXPECT_EQ(error_reason(r), "NoConnectivity");
}

TEST(Api, ActivityIsSeededAndConfined) {
  auto c = with_index().client();
  const auto id = create(c, boundary_png(5));
  ASSERT_EQ(add_piece(c, id, centre_rect(5))->status, 200);
  const httplib::Headers png{{"Accept", "image/png"}};
  auto a = c.Post("/v1/sessions/" + id + "/activity?seed=3", png, "", "application/json");
  auto b = c.Post("/v1/sessions/" + id + "/activity?seed=3", png, "", "application/json");
  ASSERT_EQ(a->status, 200) << a->body;
  EXPECT_EQ(a->get_header_value("Content-Type"), "image/png");
  EXPECT_EQ(a->body, b->body);

  const std::vector<std::uint8_t> bytes(a->body.begin(), a->body.end());
  const auto gray = gray_from_png(decode_png(bytes));
  const auto inside = extract_boundary(make_procedural_floorplan(5)).inside;
  long support = 0;
  for (std::size_t i = 0; i < gray.size(); ++i) {
    if (!inside.pixels()[i]) {
      ASSERT_EQ(gray.pixels()[i], 0);
    }
    support += gray.pixels()[i] > 0;
  }
  EXPECT_GT(support, 0);

  auto many = c.Post("/v1/sessions/" + id + "/activity?seed=3&samples=3", "", "application/json");
  ASSERT_EQ(many->status, 200);
  const auto body = json::parse(many->body);
  EXPECT_EQ(body.at("samples").size(), 3u);
  EXPECT_EQ(body.at("activity_png"), body.at("samples")[0]);
  EXPECT_EQ(c.Post("/v1/sessions/" + id + "/activity?samples=0", "", "application/json")->status, 400);
}

TEST(Api, GenerateNeedsFreshActivity) {
  auto c = with_index().client();
  const auto id = create(c, boundary_png(6));
  auto missing = c.Post("/v1/sessions/" + id + "/generate", "", "application/json");
  EXPECT_EQ(missing->status, 422);
  EXPECT_EQ(error_reason(missing), "MissingActivity");

  ASSERT_EQ(add_piece(c, id, centre_rect(6))->status, 200);
  ASSERT_EQ(c.Post("/v1/sessions/" + id + "/activity?seed=1", "", "application/json")->status, 200);
  auto g1 = c.Post("/v1/sessions/" + id + "/generate?seed=2", "", "application/json");
  auto g2 = c.Post("/v1/sessions/" + id + "/generate?seed=2", "", "application/json");
  ASSERT_EQ(g1->status, 200) << g1->body;
  const auto r1 = json::parse(g1->body), r2 = json::parse(g2->body);
  EXPECT_EQ(r1.at("category_png"), r2.at("category_png"));
  for (const char* k : {"category_png", "vector", "svg", "success"}) EXPECT_TRUE(r1.contains(k)) << k;
  EXPECT_TRUE(r1.at("success").contains("ok"));

  const auto png = base64_decode(r1.at("category_png").get<std::string>());
  const auto category = labels_from_codes(gray_from_png(decode_png(png)));
  EXPECT_TRUE(is_confined(category, extract_boundary(make_procedural_floorplan(6)).inside));

  // Editing the furniture drops the activity map.
  const auto remove = json{{"op", "remove"}, {"id", 1}}.dump();
  ASSERT_EQ(c.Post("/v1/sessions/" + id + "/furniture", remove, "application/json")->status, 200);
  EXPECT_EQ(c.Post("/v1/sessions/" + id + "/generate", "", "application/json")->status, 422);
}

TEST(Api, AutoModeFurnishesProvisionalLayout) {
  auto c = with_index().client();
  const auto id = create(c, boundary_png(8));
  auto r = c.Post("/v1/sessions/" + id + "/activity?mode=auto&seed=4", "", "application/json");
  ASSERT_EQ(r->status, 200) << r->body;
  EXPECT_FALSE(json::parse(r->body).at("furniture_used").empty());
  EXPECT_EQ(json::parse(c.Get("/v1/sessions/" + id)->body).at("mode"), "Auto");
}

TEST(Api, SessionsAreIsolatedUnderConcurrency) {
  auto& server = with_index();
  std::vector<std::thread> workers;
  std::vector<std::string> ids(4);
  std::vector<std::size_t> counts(4);
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&, t] {
      auto c = server.client();
      ids[t] = create(c, boundary_png(3));
      for (int k = 0; k <= t; ++k) add_piece(c, ids[t], centre_rect(3, 4 + k));
      counts[t] = furniture_count(c, ids[t]);
    });
  for (auto& w : workers) w.join();
  for (int t = 0; t < 4; ++t) EXPECT_EQ(counts[t], static_cast<std::size_t>(t + 1));
}

TEST(Api, WithoutIndexRetrievalIsUnavailable) {
  Running bare(nullptr);
  auto c = bare.client();
  const auto id = create(c, boundary_png(9));
  auto r = c.Get("/v1/sessions/" + id + "/recommendations");
  EXPECT_EQ(r->status, 503);
  EXPECT_EQ(error_reason(r), "IndexNotLoaded");
  ASSERT_EQ(add_piece(c, id, centre_rect(9))->status, 200);
  ASSERT_EQ(c.Post("/v1/sessions/" + id + "/activity", "", "application/json")->status, 200);
  EXPECT_EQ(c.Post("/v1/sessions/" + id + "/generate", "", "application/json")->status, 503);
}

TEST(Config, ParsesKeysCommentsAndQuotes) {
  const auto cfg = parse_config("# comment\ndataset = \"/data/plans\"\nseed=42\nport = 9000\n\nretrieval_k = 3 # trailing\n");
  EXPECT_EQ(cfg.dataset, "/data/plans");
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.port, 9000);
  EXPECT_EQ(cfg.retrieval_k, 3u);
  EXPECT_THROW(parse_config("colour = blue\n"), Error);
  EXPECT_THROW(parse_config("port = many\n"), Error);
}

TEST(Config, EnvironmentOverridesDataset) {
  auto cfg = parse_config("dataset = a\n");
  ::setenv("ACTFLOOR_DATASET", "/override", 1);
  apply_env_overrides(cfg);
  ::unsetenv("ACTFLOOR_DATASET");
  EXPECT_EQ(cfg.dataset, "/override");
}

TEST(Base64, RoundTrip) {
  std::vector<std::uint8_t> bytes;
  for (int n = 0; n < 40; ++n) {
    EXPECT_EQ(base64_decode(base64_encode(bytes)), bytes);
    bytes.push_back(static_cast<std::uint8_t>(n * 97 + 13));
  }
  EXPECT_EQ(base64_encode(std::vector<std::uint8_t>{'f', 'o', 'o', 'b'}), "Zm9vYg==");
  EXPECT_THROW(base64_decode("@@@@"), Error);
}
