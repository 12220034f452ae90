#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "utsarjan/notify/event.hpp"
#include "utsarjan/notify/sinks.hpp"

namespace utsarjan::notify {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  double multiplier = 2.0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;
Sleeper thread_sleeper();

struct SinkOutcome {
  std::string event_id;
  std::string sink;
  int attempts = 0;
  bool delivered = false;
  std::string error;
};

/// One feed flag per event and one outcome per (event, sink), event-major.
struct DeliveryReport {
  std::vector<bool> feed_appended;
  std::vector<SinkOutcome> outcomes;
};

using SinkList = std::vector<std::shared_ptr<NotificationSink>>;

/// Delivers to one sink with bounded retries. Sink exceptions count as failed attempts.
SinkOutcome deliver_with_retry(const NotificationEvent& event, NotificationSink& sink, const RetryPolicy& policy,
                               const Sleeper& sleep);

/// Writes every event to the feed, then to each sink with retries.
/// Feed failures propagate; sink failures are reported.
DeliveryReport dispatch(std::span<const NotificationEvent> events, Feed& feed, const SinkList& sinks,
                        const RetryPolicy& policy = {}, const Sleeper& sleep = thread_sleeper());

/// Feed write on the caller's thread, external sinks on a worker thread.
/// `submit` blocks while the queue is full.
class AsyncDispatcher {
 public:
  using Observer = std::function<void(const SinkOutcome&)>;

  AsyncDispatcher(std::shared_ptr<Feed> feed, SinkList sinks, RetryPolicy policy = {},
                  std::size_t queue_capacity = 1024, Sleeper sleep = thread_sleeper(), Observer observer = {});
  ~AsyncDispatcher();
  AsyncDispatcher(const AsyncDispatcher&) = delete;
  AsyncDispatcher& operator=(const AsyncDispatcher&) = delete;

  /// Returns the feed flags; sink delivery happens later.
  std::vector<bool> submit(std::span<const NotificationEvent> events);
  /// Waits until every queued event has been through all sinks.
  void flush();
  const SinkList& sinks() const { return sinks_; }

 private:
  void run();

  std::shared_ptr<Feed> feed_;
  SinkList sinks_;
  RetryPolicy policy_;
  std::size_t capacity_;
  Sleeper sleep_;
  Observer observer_;

  std::mutex mutex_;
  std::condition_variable changed_;
  std::deque<NotificationEvent> queue_;
  std::size_t in_flight_ = 0;
  bool stopping_ = false;
  std::thread worker_;
};

}  // namespace utsarjan::notify
