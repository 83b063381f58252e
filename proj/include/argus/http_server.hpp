#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "argus/session.hpp"

namespace argus::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  // 0 picks a free port.
  int port = 8080;
  // Served at / when set (the browser front end).
  std::optional<std::filesystem::path> static_dir;
};

// Thin HTTP front for SessionService. All routes live under /v1.
class HttpServer {
 public:
  HttpServer(SessionService& service, ServerOptions options);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the socket and returns the port in use. Throws IoError.
  int bind();
  // Serves until stop(); call bind() first.
  void run();
  // Blocks until run() is accepting connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace argus::service
