#include "utsarjan/notify/dispatch.hpp"

#include <exception>

namespace utsarjan::notify {

Sleeper thread_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

SinkOutcome deliver_with_retry(const NotificationEvent& event, NotificationSink& sink, const RetryPolicy& policy,
                               const Sleeper& sleep) {
  SinkOutcome out{event.id, sink.name(), 0, false, {}};
  auto backoff = policy.initial_backoff;
  for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
    if (attempt > 1) {
      sleep(backoff);
      backoff = std::chrono::milliseconds(static_cast<long long>(backoff.count() * policy.multiplier));
    }
    out.attempts = attempt;
    DeliveryResult r;
    try {
      r = sink.deliver(event);
    } catch (const std::exception& e) {
      r = {false, e.what()};
    }
    if (r.ok) {
      out.delivered = true;
      out.error.clear();
      return out;
    }
    out.error = r.error;
  }
  return out;
}

DeliveryReport dispatch(std::span<const NotificationEvent> events, Feed& feed, const SinkList& sinks,
                        const RetryPolicy& policy, const Sleeper& sleep) {
  DeliveryReport report;
  for (const auto& e : events) report.feed_appended.push_back(feed.append(e));
  for (const auto& e : events) {
    for (const auto& sink : sinks) report.outcomes.push_back(deliver_with_retry(e, *sink, policy, sleep));
  }
  return report;
}

AsyncDispatcher::AsyncDispatcher(std::shared_ptr<Feed> feed, SinkList sinks, RetryPolicy policy,
                                 std::size_t queue_capacity, Sleeper sleep, Observer observer)
    : feed_(std::move(feed)),
      sinks_(std::move(sinks)),
      policy_(policy),
      capacity_(queue_capacity == 0 ? 1 : queue_capacity),
      sleep_(std::move(sleep)),
      observer_(std::move(observer)) {
  if (!sinks_.empty()) worker_ = std::thread([this] { run(); });
}

AsyncDispatcher::~AsyncDispatcher() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  changed_.notify_all();
  if (worker_.joinable()) worker_.join();
}

std::vector<bool> AsyncDispatcher::submit(std::span<const NotificationEvent> events) {
  std::vector<bool> appended;
  for (const auto& e : events) appended.push_back(feed_->append(e));
  if (sinks_.empty()) return appended;
  for (const auto& e : events) {
    std::unique_lock lock(mutex_);
    changed_.wait(lock, [&] { return queue_.size() < capacity_ || stopping_; });
    if (stopping_) break;
    queue_.push_back(e);
    changed_.notify_all();
  }
  return appended;
}

void AsyncDispatcher::flush() {
  std::unique_lock lock(mutex_);
  changed_.wait(lock, [&] { return (queue_.empty() && in_flight_ == 0) || stopping_; });
}

void AsyncDispatcher::run() {
  for (;;) {
    NotificationEvent event;
    {
      std::unique_lock lock(mutex_);
      changed_.wait(lock, [&] { return !queue_.empty() || stopping_; });
      if (queue_.empty()) return;
      event = std::move(queue_.front());
      queue_.pop_front();
      ++in_flight_;
    }
    changed_.notify_all();
    for (const auto& sink : sinks_) {
      auto outcome = deliver_with_retry(event, *sink, policy_, sleep_);
      if (observer_) observer_(outcome);
    }
    {
      std::lock_guard lock(mutex_);
      --in_flight_;
    }
    changed_.notify_all();
  }
}

}  // namespace utsarjan::notify
