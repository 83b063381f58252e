#include <doctest.h>

#include <filesystem>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "argus/http_server.hpp"
#include "argus/serialization.hpp"

using namespace argus;
using namespace argus::service;

namespace {

const std::filesystem::path kScenarios = ARGUS_SCENARIO_DIR;

// Server on a free port, served from a background thread for one test.
struct LiveServer {
  SessionService service;
  HttpServer server;
  int port;
  std::thread thread;

  explicit LiveServer(ServerOptions options = {})
      : server(service, with_any_port(std::move(options))), port(server.bind()),
        thread([this] { server.run(); }) {
    server.wait_until_ready();
  }
  ~LiveServer() {
    server.stop();
    thread.join();
  }

  static ServerOptions with_any_port(ServerOptions o) {
    o.port = 0;
    return o;
  }
};

json body_of(const httplib::Result& r) { return json::parse(r->body); }

}  // namespace

TEST_CASE("a round over HTTP") {
  LiveServer live;
  httplib::Client client("127.0.0.1", live.port);

  const json create{{"scenario", io::read_json_file(kScenarios / "example.json")}};
  auto r = client.Post("/v1/sessions", create.dump(), "application/json");
  REQUIRE(r);
  REQUIRE(r->status == 201);
  CHECK(r->get_header_value("Content-Type").find("application/json") != std::string::npos);
  const std::string base = "/v1/sessions/" + body_of(r).at("id").get<std::string>();

  r = client.Post(base + "/trust", json{{"tau", 0.6}}.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 200);
  r = client.Post(base + "/trust", json{{"tau", 0.6}}.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 409);
  CHECK(body_of(r).at("error") == "out_of_order");

  r = client.Post(base + "/counter", json{{"pool_index", 0}}.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 200);
  r = client.Post(base + "/ranking", json{{"permutation", {2, 3, 0, 1}}}.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(body_of(r).at("state") == "ended");

  r = client.Get(base + "/trace");
  REQUIRE(r);
  CHECK(r->status == 200);
  const auto trace = io::trace_from_json(body_of(r));
  CHECK(trace.moves.size() == 2);
  CHECK(trace.rankings.size() == 1);
}

TEST_CASE("HTTP errors") {
  LiveServer live;
  httplib::Client client("127.0.0.1", live.port);
  auto r = client.Get("/v1/sessions/missing");
  REQUIRE(r);
  CHECK(r->status == 404);
  CHECK(body_of(r).at("error") == "not_found");
  r = client.Post("/v1/sessions", "{ not json", "application/json");
  REQUIRE(r);
  CHECK(r->status == 422);
  r = client.Delete("/v1/sessions");
  REQUIRE(r);
  CHECK(r->status == 405);
  r = client.Get("/v1/scenarios");
  REQUIRE(r);
  CHECK(r->status == 200);
}

TEST_CASE("static files next to the API") {
  const auto dir = std::filesystem::temp_directory_path() / "argus_http_static";
  std::filesystem::create_directories(dir);
  io::write_file_atomic(dir / "index.html", "<p>hello</p>\n");
  {
    LiveServer live({.static_dir = dir});
    httplib::Client client("127.0.0.1", live.port);
    auto r = client.Get("/index.html");
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(r->body == "<p>hello</p>\n");
    r = client.Get("/v1/scenarios");
    REQUIRE(r);
    CHECK(r->status == 200);
  }
  std::filesystem::remove_all(dir);
}
