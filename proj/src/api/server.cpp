#include "utsarjan/api/server.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <iostream>

#include "utsarjan/diary/repository.hpp"
#include "utsarjan/notify/sinks.hpp"

namespace utsarjan::api {

std::unique_ptr<ApiService> build_service(const Config& config, std::shared_ptr<Mailer> mailer) {
  auto growth =
      std::make_shared<const rules::GrowthReferenceTable>(rules::GrowthReferenceTable::load(config.growth_table.string()));
  auto bp = std::make_shared<const rules::BpReferenceTable>(rules::BpReferenceTable::load(config.bp_table.string(), growth));

  ServiceDeps deps;
  deps.store = std::make_shared<diary::DiaryStore>(std::make_shared<diary::FileRepository>(config.store_path),
                                                   std::make_shared<diary::BlobStore>(config.blob_dir), system_clock(),
                                                   diary::StoreOptions{config.max_image_bytes});
  deps.bp_table = bp;
  deps.growth_table = growth;
  if (mailer) {
    deps.mailer = std::move(mailer);
  } else if (!config.smtp.url.empty()) {
    deps.mailer = std::make_shared<SmtpMailer>(config.smtp);
  }
  for (const auto& url : config.webhook_urls) deps.sinks.push_back(std::make_shared<notify::WebhookSink>(url));
  if (config.log_sink_path) deps.sinks.push_back(std::make_shared<notify::LogSink>(*config.log_sink_path));
  deps.retry.max_attempts = config.retry_attempts;
  deps.retry.initial_backoff = std::chrono::milliseconds(config.retry_initial_backoff_ms);
  deps.sink_queue_capacity = config.sink_queue_capacity;
  deps.sink_observer = [](const notify::SinkOutcome& o) {
    if (!o.delivered) {
      std::cerr << "notification " << o.event_id << " not delivered to " << o.sink << " after " << o.attempts
                << " attempts: " << o.error << '\n';
    }
  };
  if (config.hospitals_file) deps.hospitals = nlohmann::json::parse(diary::read_file(*config.hospitals_file));
  deps.credentials_file = config.store_path / "credentials.json";

  ServiceOptions options;
  options.hash_cost = config.hash_cost;
  options.hash_memory_bytes = config.hash_memory_kib * 1024;
  options.token_ttl = std::chrono::hours(config.token_ttl_hours);
  return std::make_unique<ApiService>(std::move(deps), options);
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

HttpServer::HttpServer(ApiService& service, std::optional<std::filesystem::path> static_dir,
                       std::size_t max_body_bytes)
    : server_(std::make_unique<httplib::Server>()) {
  server_->set_payload_max_length(max_body_bytes);
  if (static_dir && !server_->set_mount_point("/", static_dir->string())) {
    throw std::runtime_error("static_dir is not a directory: " + static_dir->string());
  }
  auto handler = [&service](const httplib::Request& hreq, httplib::Response& hres) {
    Request req;
    req.method = hreq.method;
    req.path = hreq.path;
    for (const auto& [k, v] : hreq.params) req.query.emplace(k, v);
    for (const auto& [k, v] : hreq.headers) req.headers.emplace(lower(k), v);
    req.body = hreq.body;
    auto res = service.handle(req);
    hres.status = res.status;
    for (const auto& [k, v] : res.headers) hres.set_header(k, v);
    hres.set_content(res.body, res.content_type);
  };
  for (const char* pattern : {"/healthz", "/auth/.*", "/patients(/.*)?", "/doctors(/.*)?", "/hospitals/.*"}) {
    server_->Get(pattern, handler);
    server_->Post(pattern, handler);
  }
}

HttpServer::~HttpServer() = default;

void HttpServer::listen(const std::string& address, int port) {
  if (!server_->bind_to_port(address, port)) {
    throw std::runtime_error("cannot bind " + address + ":" + std::to_string(port));
  }
  run();
}

int HttpServer::bind_any(const std::string& address) {
  int port = server_->bind_to_any_port(address);
  if (port < 0) throw std::runtime_error("cannot bind " + address);
  return port;
}

void HttpServer::run() { server_->listen_after_bind(); }
void HttpServer::wait_until_ready() { server_->wait_until_ready(); }
void HttpServer::stop() { server_->stop(); }

}  // namespace utsarjan::api
