#include "layoutforge/service.hpp"
#include "layoutforge/synthetic.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <thread>

namespace {

using namespace layoutforge;

class ServiceTest : public ::testing::Test {
 protected:
  std::unique_ptr<PriorStore> store = fixtures::demo_store();
  std::shared_ptr<ManualExecutor> executor = std::make_shared<ManualExecutor>();
  Service service{*store, synthetic::demo_corpus(2, 9), executor};

  Json post_layout(const Scene& scene, int seed) {
    Json body{{"scene", scene_to_json(scene)}, {"seed", seed}};
    const Response r = service.handle("POST", "/layout", body.dump());
    EXPECT_EQ(r.status, 200) << r.body;
    return Json::parse(r.body);
  }
};

TEST_F(ServiceTest, HealthAndScenes) {
  const Response h = service.handle("GET", "/health", "");
  EXPECT_EQ(h.status, 200);
  EXPECT_EQ(Json::parse(h.body), (Json{{"status", "ok"}}));
  const Json ids = Json::parse(service.handle("GET", "/scenes", "").body).at("scenes");
  ASSERT_EQ(ids.size(), 8u);
  const Response one = service.handle("GET", "/scenes/" + ids[0].get<std::string>(), "");
  EXPECT_EQ(one.status, 200);
  EXPECT_EQ(scene_from_json(Json::parse(one.body)).id, ids[0]);
  EXPECT_EQ(service.handle("GET", "/scenes/nope", "").status, 404);
  EXPECT_EQ(service.handle("DELETE", "/health", "").status, 404);
}

TEST_F(ServiceTest, LayoutIsSeedDeterministic) {
  const Scene bedroom = synthetic::bedroom_request();
  const Json a = post_layout(bedroom, 7);
  const Json b = post_layout(bedroom, 7);
  EXPECT_EQ(a.dump(), b.dump());
  const Json c = post_layout(bedroom, 8);
  EXPECT_NE(a.at("scene").dump(), c.at("scene").dump());
  EXPECT_EQ(a.at("scene").at("objects").size(), bedroom.objects.size());
  for (const auto& o : a.at("scene").at("objects")) EXPECT_FALSE(o.at("transform").is_null());
}

TEST_F(ServiceTest, LayoutByCorpusIdAndErrors) {
  const std::string id = Json::parse(service.scenes().body).at("scenes")[0];
  const Response ok = service.handle("POST", "/layout", Json{{"sceneId", id}, {"seed", 1}}.dump());
  EXPECT_EQ(ok.status, 200);
  EXPECT_EQ(service.handle("POST", "/layout", "{not json").status, 400);
  EXPECT_EQ(service.handle("POST", "/layout", "{}").status, 400);
  EXPECT_EQ(service.handle("POST", "/layout", Json{{"sceneId", "nope"}}.dump()).status, 404);
  Json bad = scene_to_json(synthetic::bedroom_request());
  bad["room"]["floor"] = Json::parse("[[0,0],[4,3],[4,0],[0,3]]");
  EXPECT_EQ(service.handle("POST", "/layout", Json{{"scene", bad}}.dump()).status, 422);
}

TEST_F(ServiceTest, ConfigOverridesApply) {
  Json body{{"scene", scene_to_json(synthetic::crowded_request())},
            {"seed", 3},
            {"config", {{"nMax", 1}}}};
  const Json r = Json::parse(service.handle("POST", "/layout", body.dump()).body);
  for (const auto& s : r.at("stats")) EXPECT_LE(s.at("rounds").get<int>(), 1);
}

TEST_F(ServiceTest, MissingHyperRelationIsPendingThenComplete) {
  const Scene living = synthetic::living_dining_request();
  const Json first = post_layout(living, 4);
  EXPECT_EQ(first.at("hyperStatus"), "pending");
  EXPECT_FALSE(first.at("scene").at("objects").empty());
  EXPECT_GE(executor->pending(), 1u);
  const Json again = post_layout(living, 4);
  EXPECT_EQ(again.dump(), first.dump());
  executor->run_all();
  const Json later = post_layout(living, 4);
  EXPECT_EQ(later.at("hyperStatus"), "complete");
}

TEST_F(ServiceTest, HyperSubmission) {
  const Json body{{"dominant", "coffee_table"}, {"secondaries", {"sofa", "tv_stand"}}};
  const Response pending = service.handle("POST", "/hyper", body.dump());
  EXPECT_EQ(pending.status, 202);
  EXPECT_EQ(Json::parse(pending.body).at("status"), "pending");
  executor->run_all();
  const Response done = service.handle("POST", "/hyper", Json{{"key", "coffee_table|sofa*1,tv_stand*1"}}.dump());
  EXPECT_EQ(done.status, 200);
  EXPECT_EQ(Json::parse(done.body).at("status"), "complete");
  const Json keys = Json::parse(service.handle("GET", "/priors/keys", "").body);
  EXPECT_FALSE(keys.at("pairwise").empty());
  EXPECT_EQ(keys.at("hyper"), Json::array({"coffee_table|sofa*1,tv_stand*1"}));

  const Response failing =
      service.handle("POST", "/hyper", Json{{"key", "coffee_table|wardrobe*2"}}.dump());
  if (failing.status == 202) executor->run_all();
  const Json failed = Json::parse(
      service.handle("POST", "/hyper", Json{{"key", "coffee_table|wardrobe*2"}}.dump()).body);
  EXPECT_EQ(failed.at("status"), "failed");
  EXPECT_TRUE(failed.contains("reason"));
  EXPECT_EQ(service.handle("POST", "/hyper", Json{{"key", "nobar"}}.dump()).status, 400);
}

TEST_F(ServiceTest, OverHttp) {
  httplib::Server server;
  service.install(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  const auto health = client.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "*");
  const Json body{{"scene", scene_to_json(synthetic::bedroom_request())}, {"seed", 7}};
  const auto a = client.Post("/layout", body.dump(), "application/json");
  const auto b = client.Post("/layout", body.dump(), "application/json");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->status, 200);
  EXPECT_EQ(a->body, b->body);
  EXPECT_EQ(a->body, service.layout(body.dump()).body);

  // A second server on the same port cannot bind.
  EXPECT_EQ(serve(service, "127.0.0.1", port), 3);
  server.stop();
  loop.join();
}

}  // namespace
