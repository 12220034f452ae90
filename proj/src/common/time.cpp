#include "utsarjan/common/time.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace utsarjan {

namespace {

bool parse_int(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

std::optional<std::chrono::year_month_day> parse_ymd(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
  std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                  std::chrono::day{day}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date");
  days_ = std::chrono::sys_days{ymd};
}

std::optional<Date> Date::try_parse(std::string_view text) {
  auto ymd = parse_ymd(text);
  if (!ymd) return std::nullopt;
  return Date{std::chrono::sys_days{*ymd}};
}

Date Date::parse(std::string_view text) {
  auto d = try_parse(text);
  if (!d) throw std::invalid_argument("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
  return *d;
}

std::string Date::to_string() const {
  auto ymd = this->ymd();
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<Timestamp> Timestamp::try_parse(std::string_view text) {
  if (text.size() != 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
    return std::nullopt;
  }
  auto date = Date::try_parse(text.substr(0, 10));
  int hh = 0, mm = 0, ss = 0;
  if (!date || !parse_int(text.substr(11, 2), hh) || !parse_int(text.substr(14, 2), mm) ||
      !parse_int(text.substr(17, 2), ss) || hh > 23 || mm > 59 || ss > 59) {
    return std::nullopt;
  }
  return Timestamp{std::chrono::sys_seconds{date->sys_days()} + std::chrono::hours{hh} +
                   std::chrono::minutes{mm} + std::chrono::seconds{ss}};
}

Timestamp Timestamp::parse(std::string_view text) {
  auto t = try_parse(text);
  if (!t) throw std::invalid_argument("invalid timestamp '" + std::string(text) + "'");
  return *t;
}

std::string Timestamp::to_string() const {
  auto day = std::chrono::floor<std::chrono::days>(seconds_);
  std::chrono::hh_mm_ss hms{seconds_ - day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
  return Date{day}.to_string() + buf;
}

int age_in_months(Date birth, Date on) {
  auto b = birth.ymd();
  auto o = on.ymd();
  int months = (static_cast<int>(o.year()) - static_cast<int>(b.year())) * 12 +
               (static_cast<int>(static_cast<unsigned>(o.month())) -
                static_cast<int>(static_cast<unsigned>(b.month())));
  if (static_cast<unsigned>(o.day()) < static_cast<unsigned>(b.day())) --months;
  return months;
}

Clock system_clock() {
  return [] {
    return Timestamp{std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now())};
  };
}

}  // namespace utsarjan
