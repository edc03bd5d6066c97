#include "agrisense/dates.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace agrisense {

namespace {
constexpr std::int64_t kSecondsPerDay = 86400;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}
}  // namespace

std::int64_t days_from_civil(Date date) {
  const std::chrono::year_month_day ymd{std::chrono::year{date.y},
                                        std::chrono::month{date.m},
                                        std::chrono::day{date.d}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date");
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

Date civil_from_days(std::int64_t days) {
  const std::chrono::sys_days sd{std::chrono::days{days}};
  const std::chrono::year_month_day ymd{sd};
  return Date{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
              static_cast<unsigned>(ymd.day())};
}

Date date_of_timestamp(std::int64_t ts_utc, std::int64_t utc_offset_seconds) {
  return civil_from_days(floor_div(ts_utc + utc_offset_seconds, kSecondsPerDay));
}

std::int64_t timestamp_of_date(Date date, std::int64_t utc_offset_seconds) {
  return days_from_civil(date) * kSecondsPerDay - utc_offset_seconds;
}

std::string format_date(Date date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", date.y, date.m, date.d);
  return buf;
}

std::string format_timestamp(std::int64_t ts_utc) {
  const std::int64_t days = floor_div(ts_utc, kSecondsPerDay);
  const std::int64_t rem = ts_utc - days * kSecondsPerDay;
  const Date d = civil_from_days(days);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", d.y, d.m,
                d.d, static_cast<int>(rem / 3600),
                static_cast<int>((rem / 60) % 60), static_cast<int>(rem % 60));
  return buf;
}

Date parse_date(const std::string& text) {
  int y = 0;
  unsigned m = 0, d = 0;
  char trail = 0;
  if (std::sscanf(text.c_str(), "%d-%u-%u%c", &y, &m, &d, &trail) != 3)
    throw std::invalid_argument("malformed date: " + text);
  Date date{y, m, d};
  days_from_civil(date);  // validates
  return date;
}

std::int64_t parse_timestamp(const std::string& text) {
  int y = 0;
  unsigned mo = 0, da = 0;
  int h = 0, mi = 0, s = 0;
  char z = 0, trail = 0;
  const int n =
      std::sscanf(text.c_str(), "%d-%u-%uT%d:%d:%d%c%c", &y, &mo, &da, &h, &mi, &s, &z, &trail);
  if (n < 6 || (n >= 7 && z != 'Z') || n == 8)
    throw std::invalid_argument("malformed timestamp: " + text);
  if (h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60)
    throw std::invalid_argument("malformed timestamp: " + text);
  return days_from_civil(Date{y, mo, da}) * kSecondsPerDay + h * 3600 + mi * 60 + s;
}

}  // namespace agrisense
