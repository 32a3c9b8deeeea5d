#pragma once

// HTTP front end. Each route is a plain member function returning status and
// body, so tests can drive the service without a socket; install() binds the
// same functions to an httplib server.

#include "layoutforge/pipeline.hpp"

#include <memory>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace layoutforge {

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

class Service {
 public:
  Service(PriorStore& store, std::vector<Scene> corpus, std::shared_ptr<Executor> executor,
          LayoutConfig defaults = {});

  Response health() const;
  Response scenes() const;
  Response scene(const std::string& id) const;
  /// Body: {"scene": Scene | "sceneId": id, "seed": n, "config": {...}}.
  Response layout(const std::string& body);
  Response prior_keys() const;
  /// Body: {"key": "dom|a*1,b*2"} or {"dominant": id, "secondaries": [id, ...]},
  /// optional "force": true to retry a failed key.
  Response hyper(const std::string& body);

  /// Routes a request by method and path (used by tests and install()).
  Response handle(const std::string& method, const std::string& path, const std::string& body);

  void install(httplib::Server& server);

  HyperScheduler& scheduler() { return *scheduler_; }

 private:
  PriorStore& store_;
  std::vector<Scene> corpus_;
  Catalog corpus_catalog_;
  std::shared_ptr<Executor> executor_;
  std::unique_ptr<HyperScheduler> scheduler_;
  LayoutConfig defaults_;
};

/// Serves until the process is stopped. Returns 3 when the address cannot
/// be bound.
int serve(Service& service, const std::string& host, int port);

}  // namespace layoutforge
