#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "utsarjan/diary/store.hpp"
#include "utsarjan/notify/event.hpp"

namespace utsarjan::notify {

/// In-app feed. Appends are idempotent on the event's key.
class Feed {
 public:
  virtual ~Feed() = default;
  /// Returns true if the feed grew. Throws on storage failure.
  virtual bool append(const NotificationEvent& event) = 0;
};

/// Feed backed by the patient's record in the diary store.
class StoreFeed : public Feed {
 public:
  explicit StoreFeed(std::shared_ptr<diary::DiaryStore> store) : store_(std::move(store)) {}
  bool append(const NotificationEvent& event) override;

 private:
  std::shared_ptr<diary::DiaryStore> store_;
};

struct DeliveryResult {
  bool ok = false;
  std::string error;
};

/// External delivery channel. Implementations must be safe to call from a
/// worker thread and should treat a repeated idempotency key as delivered.
class NotificationSink {
 public:
  virtual ~NotificationSink() = default;
  virtual std::string name() const = 0;
  virtual DeliveryResult deliver(const NotificationEvent& event) = 0;
};

/// POSTs the wire JSON; any 2xx status is an acknowledgement. The key is also
/// sent in an Idempotency-Key header.
class WebhookSink : public NotificationSink {
 public:
  explicit WebhookSink(std::string url, std::chrono::milliseconds timeout = std::chrono::seconds(5));
  std::string name() const override { return "webhook:" + url_; }
  DeliveryResult deliver(const NotificationEvent& event) override;

 private:
  std::string url_;
  std::chrono::milliseconds timeout_;
};

/// Appends one JSON line per event to a file, skipping keys already present.
class LogSink : public NotificationSink {
 public:
  explicit LogSink(std::filesystem::path path);
  std::string name() const override { return "log:" + path_.string(); }
  DeliveryResult deliver(const NotificationEvent& event) override;

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
  std::set<std::string> seen_;
};

}  // namespace utsarjan::notify
