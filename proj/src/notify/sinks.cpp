#include "utsarjan/notify/sinks.hpp"

#include <curl/curl.h>

#include <fstream>
#include <stdexcept>

namespace utsarjan::notify {

bool StoreFeed::append(const NotificationEvent& event) { return store_->append_notification(to_record(event)); }

namespace {

struct CurlGlobal {
  CurlGlobal() { curl_global_init(CURL_GLOBAL_DEFAULT); }
  ~CurlGlobal() { curl_global_cleanup(); }
};

size_t discard(char*, size_t size, size_t count, void*) { return size * count; }

}  // namespace

WebhookSink::WebhookSink(std::string url, std::chrono::milliseconds timeout) : url_(std::move(url)), timeout_(timeout) {
  static CurlGlobal global;
}

DeliveryResult WebhookSink::deliver(const NotificationEvent& event) {
  std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(), curl_easy_cleanup);
  if (!curl) return {false, "curl_easy_init failed"};
  std::string body = to_wire_json(event).dump();
  std::string key_header = "Idempotency-Key: " + event.idempotency_key;
  curl_slist* headers = curl_slist_append(nullptr, "Content-Type: application/json");
  headers = curl_slist_append(headers, key_header.c_str());
  std::unique_ptr<curl_slist, decltype(&curl_slist_free_all)> header_guard(headers, curl_slist_free_all);

  curl_easy_setopt(curl.get(), CURLOPT_URL, url_.c_str());
  curl_easy_setopt(curl.get(), CURLOPT_HTTPHEADER, headers);
  curl_easy_setopt(curl.get(), CURLOPT_POSTFIELDS, body.c_str());
  curl_easy_setopt(curl.get(), CURLOPT_POSTFIELDSIZE, static_cast<long>(body.size()));
  curl_easy_setopt(curl.get(), CURLOPT_TIMEOUT_MS, static_cast<long>(timeout_.count()));
  curl_easy_setopt(curl.get(), CURLOPT_NOSIGNAL, 1L);
  curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, discard);

  CURLcode rc = curl_easy_perform(curl.get());
  if (rc != CURLE_OK) return {false, curl_easy_strerror(rc)};
  long status = 0;
  curl_easy_getinfo(curl.get(), CURLINFO_RESPONSE_CODE, &status);
  if (status < 200 || status >= 300) return {false, "HTTP " + std::to_string(status)};
  return {true, {}};
}

LogSink::LogSink(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_object() && j.contains("idempotency_key")) seen_.insert(j["idempotency_key"].get<std::string>());
  }
}

DeliveryResult LogSink::deliver(const NotificationEvent& event) {
  std::lock_guard lock(mutex_);
  if (seen_.contains(event.idempotency_key)) return {true, {}};
  std::ofstream out(path_, std::ios::app);
  out << to_wire_json(event).dump() << '\n';
  out.flush();
  if (!out) return {false, "cannot write " + path_.string()};
  seen_.insert(event.idempotency_key);
  return {true, {}};
}

}  // namespace utsarjan::notify
