#include "argus/http_server.hpp"

#include <httplib.h>

#include "argus/error.hpp"

namespace argus::service {

struct HttpServer::Impl {
  Impl(SessionService& s, ServerOptions o) : service(s), options(std::move(o)) {}
  SessionService& service;
  ServerOptions options;
  httplib::Server server;
  int port = -1;
};

namespace {

void reply(const Response& r, httplib::Response& res) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

}  // namespace

HttpServer::HttpServer(SessionService& service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
  auto& server = impl_->server;
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    reply(impl_->service.handle(req.method, req.path, req.body), res);
  };
  server.Get(R"(/v1/.*)", dispatch);
  server.Post(R"(/v1/.*)", dispatch);
  server.Put(R"(/v1/.*)", dispatch);
  server.Delete(R"(/v1/.*)", dispatch);
  server.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "unexpected failure";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        reply({500, {{"error", "internal"}, {"message", message}}}, res);
      });
  if (impl_->options.static_dir) {
    if (!server.set_mount_point("/", impl_->options.static_dir->string())) {
      throw IoError("cannot serve static files from '" + impl_->options.static_dir->string() + "'");
    }
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& impl = *impl_;
  if (impl.options.port == 0) {
    impl.port = impl.server.bind_to_any_port(impl.options.host);
  } else if (impl.server.bind_to_port(impl.options.host, impl.options.port)) {
    impl.port = impl.options.port;
  } else {
    impl.port = -1;
  }
  if (impl.port < 0) {
    throw IoError("cannot bind " + impl.options.host + ":" + std::to_string(impl.options.port));
  }
  return impl.port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace argus::service
