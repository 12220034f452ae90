#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "utsarjan/api/config.hpp"
#include "utsarjan/api/service.hpp"

namespace httplib {
class Server;
}

namespace utsarjan::api {

/// Loads reference tables, hospitals and sinks named by `config` and opens the store.
std::unique_ptr<ApiService> build_service(const Config& config, std::shared_ptr<Mailer> mailer = nullptr);

/// Serves `service` over HTTP/1.1. Optionally mounts a directory of static assets at "/".
class HttpServer {
 public:
  HttpServer(ApiService& service, std::optional<std::filesystem::path> static_dir = std::nullopt,
             std::size_t max_body_bytes = 16 * 1024 * 1024);
  ~HttpServer();

  /// Binds and blocks until stop(). Throws std::runtime_error if binding fails.
  void listen(const std::string& address, int port);
  /// Binds to an ephemeral port and returns it; call run() afterwards.
  int bind_any(const std::string& address);
  void run();
  void wait_until_ready();
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace utsarjan::api
