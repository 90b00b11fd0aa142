#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace resi {

// Calendar month handle: year * 12 + (month - 1). Monthly series index on this.
using MonthIndex = int;

constexpr MonthIndex month_index(int year, int month) { return year * 12 + (month - 1); }
constexpr int year_of(MonthIndex m) { return m / 12; }
constexpr int month_of(MonthIndex m) { return m % 12 + 1; }

std::string format_month(MonthIndex m);                        // "YYYY-MM"
std::optional<MonthIndex> parse_month(std::string_view text);  // "YYYY-MM"

bool is_leap_year(int year);
int days_in_month(int year, int month);

// UTC timestamp with centisecond resolution (origin-time precision of the catalog).
struct UtcTime {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
  int centisec = 0;  // seconds * 100, 0..5999

  auto operator<=>(const UtcTime&) const = default;

  bool valid() const;
  std::int64_t to_centiseconds() const;  // since 1970-01-01T00:00:00Z
  MonthIndex month_idx() const { return month_index(year, month); }
  std::string iso8601() const;  // e.g. 1995-10-19T23:50:13.50Z
};

std::optional<UtcTime> parse_iso8601(std::string_view text);

// Half-open window of whole calendar months: [start, start + months).
struct TimeWindow {
  MonthIndex start = 0;
  int months = 1;

  MonthIndex end() const { return start + months; }
  bool contains(MonthIndex m) const { return m >= start && m < end(); }
  auto operator<=>(const TimeWindow&) const = default;
};

// Tile [first, last] (inclusive month range) with non-overlapping calendar windows.
// Yearly windows (months == 12) snap to January of the first month's year.
std::vector<TimeWindow> make_windows(MonthIndex first, MonthIndex last, int window_months);

}  // namespace resi
