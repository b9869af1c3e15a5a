#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <string>

#include "eventlift/errors.hpp"

namespace eventlift {

/// Calendar date at day granularity, UTC convention. Stored as days since
/// 1970-01-01 so ordering and day arithmetic are exact integer operations.
class DateDay {
 public:
  DateDay() = default;

  static DateDay from_days(int days) { return DateDay(days); }

  static DateDay from_ymd(int year, int month, int day) {
    namespace chr = std::chrono;
    chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                            chr::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) {
      throw validation_error("invalid calendar date: " + std::to_string(year) + "-" +
                             std::to_string(month) + "-" + std::to_string(day));
    }
    return DateDay(static_cast<int>(chr::sys_days{ymd}.time_since_epoch().count()));
  }

  /// Parses ISO-8601 `YYYY-MM-DD`.
  static DateDay parse(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3 ||
        text.size() != 10) {
      throw validation_error("unparseable date '" + text + "' (expected YYYY-MM-DD)");
    }
    return from_ymd(y, m, d);
  }

  int days_since_epoch() const { return days_; }

  /// 0 = Monday ... 6 = Sunday.
  int weekday() const {
    int w = (days_ + 3) % 7;  // 1970-01-01 was a Thursday
    return w < 0 ? w + 7 : w;
  }

  std::string to_string() const {
    namespace chr = std::chrono;
    chr::year_month_day ymd{chr::sys_days{chr::days{days_}}};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
  }

  DateDay operator+(int n) const { return DateDay(days_ + n); }
  DateDay operator-(int n) const { return DateDay(days_ - n); }
  int operator-(DateDay other) const { return days_ - other.days_; }
  DateDay& operator+=(int n) { days_ += n; return *this; }
  DateDay& operator++() { ++days_; return *this; }

  auto operator<=>(const DateDay&) const = default;

 private:
  explicit DateDay(int days) : days_(days) {}
  int days_ = 0;
};

}  // namespace eventlift
