#pragma once

#include <chrono>
#include <compare>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace utsarjan {

/// Calendar date (UTC), rendered as YYYY-MM-DD.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
  Date(int year, unsigned month, unsigned day);

  static Date parse(std::string_view text);
  static std::optional<Date> try_parse(std::string_view text);

  std::chrono::sys_days sys_days() const { return days_; }
  std::chrono::year_month_day ymd() const { return std::chrono::year_month_day{days_}; }
  std::string to_string() const;

  Date plus_days(int n) const { return Date{days_ + std::chrono::days{n}}; }
  /// Signed number of days from `other` to this date.
  int days_since(Date other) const {
    return static_cast<int>((days_ - other.days_).count());
  }

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

/// UTC instant with seconds precision, rendered as YYYY-MM-DDTHH:MM:SSZ.
class Timestamp {
 public:
  constexpr Timestamp() = default;
  constexpr explicit Timestamp(std::chrono::sys_seconds s) : seconds_(s) {}

  static Timestamp parse(std::string_view text);
  static std::optional<Timestamp> try_parse(std::string_view text);
  static Timestamp midnight(Date d) { return Timestamp{std::chrono::sys_seconds{d.sys_days()}}; }

  std::chrono::sys_seconds sys_seconds() const { return seconds_; }
  Date date() const { return Date{std::chrono::floor<std::chrono::days>(seconds_)}; }
  std::string to_string() const;

  Timestamp plus(std::chrono::seconds s) const { return Timestamp{seconds_ + s}; }

  friend constexpr auto operator<=>(const Timestamp&, const Timestamp&) = default;

 private:
  std::chrono::sys_seconds seconds_{};
};

/// Whole months elapsed from `birth` to `on` (calendar months, day-of-month aware).
int age_in_months(Date birth, Date on);

/// Injected time source. Nothing outside `system_clock()` reads the wall clock.
using Clock = std::function<Timestamp()>;

Clock system_clock();

/// Manually advanced clock for tests and replay.
class ManualClock {
 public:
  explicit ManualClock(Timestamp start) : now_(std::make_shared<Timestamp>(start)) {}
  Clock clock() const {
    return [now = now_] { return *now; };
  }
  void set(Timestamp t) { *now_ = t; }
  void advance(std::chrono::seconds s) { *now_ = now_->plus(s); }
  Timestamp now() const { return *now_; }

 private:
  std::shared_ptr<Timestamp> now_;
};

}  // namespace utsarjan
