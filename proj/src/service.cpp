#include "layoutforge/service.hpp"

#include "layoutforge/error.hpp"

#include <httplib.h>

#include <iostream>

namespace layoutforge {
namespace {

Response json_response(int status, const Json& doc) { return {status, doc.dump(), "application/json"}; }

Response error_response(int status, const std::string& message) {
  return json_response(status, Json{{"error", message}});
}

}  // namespace

Service::Service(PriorStore& store, std::vector<Scene> corpus, std::shared_ptr<Executor> executor,
                 LayoutConfig defaults)
    : store_(store),
      corpus_(std::move(corpus)),
      corpus_catalog_(catalog_of(corpus_)),
      executor_(std::move(executor)),
      scheduler_(std::make_unique<HyperScheduler>(store_, executor_, HyperOptions{}, defaults.seed)),
      defaults_(std::move(defaults)) {
  defaults_.grouping.blocking_hyper = false;
}

Response Service::health() const { return json_response(200, Json{{"status", "ok"}}); }

Response Service::scenes() const {
  Json ids = Json::array();
  for (const auto& s : corpus_) ids.push_back(s.id);
  return json_response(200, Json{{"scenes", ids}});
}

Response Service::scene(const std::string& id) const {
  for (const auto& s : corpus_) {
    if (s.id == id) return json_response(200, scene_to_json(s));
  }
  return error_response(404, "unknown scene '" + id + "'");
}

Response Service::layout(const std::string& body) {
  try {
    const Json doc = Json::parse(body);
    Scene request;
    if (doc.contains("scene")) {
      request = scene_from_json(doc.at("scene"), "request.scene");
    } else if (doc.contains("sceneId")) {
      const std::string id = doc.at("sceneId").get<std::string>();
      const auto it = std::find_if(corpus_.begin(), corpus_.end(),
                                   [&](const Scene& s) { return s.id == id; });
      if (it == corpus_.end()) return error_response(404, "unknown scene '" + id + "'");
      request = *it;
      for (auto& o : request.objects) o.transform.reset();
    } else {
      return error_response(400, "request needs 'scene' or 'sceneId'");
    }
    request.validate_as_request();
    LayoutConfig config = defaults_;
    config.seed = doc.value("seed", defaults_.seed);
    if (doc.contains("config")) apply_overrides(doc.at("config"), config);
    const LayoutResult result = layout_scene(request, store_, scheduler_.get(), config);
    Json out = layout_to_json(result);
    out["seed"] = config.seed;
    return json_response(200, out);
  } catch (const Json::exception& e) {
    return error_response(400, std::string("malformed request: ") + e.what());
  } catch (const ParseError& e) {
    return error_response(400, e.what());
  } catch (const ValidationError& e) {
    return error_response(422, e.what());
  } catch (const IntegrityError& e) {
    return error_response(500, e.what());
  }
}

Response Service::prior_keys() const {
  Json pairwise = Json::array();
  for (const auto& k : store_.pairwise_keys()) pairwise.push_back(k.str());
  return json_response(200, Json{{"pairwise", pairwise}, {"hyper", store_.hyper_keys()}});
}

Response Service::hyper(const std::string& body) {
  try {
    const Json doc = Json::parse(body);
    HyperKey key;
    if (doc.contains("key")) {
      key = HyperKey::parse(doc.at("key").get<std::string>());
    } else {
      key = HyperKey::make(doc.at("dominant").get<std::string>(),
                           doc.at("secondaries").get<std::vector<std::string>>());
    }
    Catalog catalog = corpus_catalog_;
    if (doc.contains("instances")) {
      for (const auto& i : doc.at("instances")) catalog.add(instance_from_json(i, "request.instances"));
    }
    if (doc.value("force", false)) scheduler_->forget_failures();
    const HyperResponse response = scheduler_->request(key, catalog);
    Json out{{"key", key.str()}, {"status", std::string(to_string(response.status))}};
    if (response.relation) out["priors"] = response.relation->priors.size();
    if (!response.reason.empty()) out["reason"] = response.reason;
    return json_response(response.status == HyperRequestStatus::kPending ? 202 : 200, out);
  } catch (const Json::exception& e) {
    return error_response(400, std::string("malformed request: ") + e.what());
  } catch (const ParseError& e) {
    return error_response(400, e.what());
  }
}

Response Service::handle(const std::string& method, const std::string& path,
                         const std::string& body) {
  if (method == "GET") {
    if (path == "/health") return health();
    if (path == "/scenes") return scenes();
    if (path.rfind("/scenes/", 0) == 0) return scene(path.substr(8));
    if (path == "/priors/keys") return prior_keys();
  } else if (method == "POST") {
    if (path == "/layout") return layout(body);
    if (path == "/hyper") return hyper(body);
  }
  return error_response(404, "no route for " + method + " " + path);
}

void Service::install(httplib::Server& server) {
  auto bind = [this](const char* method) {
    return [this, method](const httplib::Request& req, httplib::Response& res) {
      const Response r = handle(method, req.path, req.body);
      res.status = r.status;
      res.set_content(r.body, r.content_type);
      res.set_header("Access-Control-Allow-Origin", "*");
    };
  };
  server.Get("/health", bind("GET"));
  server.Get("/scenes", bind("GET"));
  server.Get(R"(/scenes/([^/]+))", bind("GET"));
  server.Get("/priors/keys", bind("GET"));
  server.Post("/layout", bind("POST"));
  server.Post("/hyper", bind("POST"));
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.status = 204;
  });
}

int serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  // httplib's default SO_REUSEPORT would let a second server share the port.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  service.install(server);
  if (!server.bind_to_port(host, port)) {
    std::cerr << "cannot bind " << host << ":" << port << "\n";
    return 3;
  }
  std::cerr << "listening on " << host << ":" << port << "\n";
  server.listen_after_bind();
  return 0;
}

}  // namespace layoutforge
