#pragma once

#include <cstdint>
#include <string>

namespace agrisense {

// Calendar date (proleptic Gregorian). Timestamps are UTC seconds since the
// Unix epoch; the offset parameter below shifts the day boundary for
// deployments whose "day" is not UTC-aligned.
struct Date {
  int y = 1970;
  unsigned m = 1;
  unsigned d = 1;

  auto operator<=>(const Date&) const = default;
};

// Days since 1970-01-01.
std::int64_t days_from_civil(Date date);
Date civil_from_days(std::int64_t days);

// Civil day containing `ts_utc`, after shifting by `utc_offset_seconds`.
Date date_of_timestamp(std::int64_t ts_utc, std::int64_t utc_offset_seconds = 0);

// Midnight (start of day) of `date` in UTC seconds, minus the offset.
std::int64_t timestamp_of_date(Date date, std::int64_t utc_offset_seconds = 0);

std::string format_date(Date date);                      // YYYY-MM-DD
std::string format_timestamp(std::int64_t ts_utc);       // YYYY-MM-DDTHH:MM:SSZ

// Throw std::invalid_argument on malformed input.
Date parse_date(const std::string& text);
std::int64_t parse_timestamp(const std::string& text);

}  // namespace agrisense
