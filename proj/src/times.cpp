#include "resi/times.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace resi {

namespace {

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string format_month(MonthIndex m) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year_of(m), month_of(m));
  return buf;
}

std::optional<MonthIndex> parse_month(std::string_view text) {
  if (text.size() != 7 || text[4] != '-') return std::nullopt;
  auto y = parse_int(text.substr(0, 4));
  auto m = parse_int(text.substr(5, 2));
  if (!y || !m || *m < 1 || *m > 12) return std::nullopt;
  return month_index(*y, *m);
}

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
  static const int base[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap_year(year)) return 29;
  return base[month - 1];
}

bool UtcTime::valid() const {
  if (month < 1 || month > 12) return false;
  if (day < 1 || day > days_in_month(year, month)) return false;
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59) return false;
  if (centisec < 0 || centisec > 5999) return false;
  return true;
}

std::int64_t UtcTime::to_centiseconds() const {
  std::int64_t days = days_from_civil(year, month, day);
  std::int64_t secs = days * 86400 + hour * 3600 + minute * 60;
  return secs * 100 + centisec;
}

std::string UtcTime::iso8601() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%02dZ", year, month, day,
                hour, minute, centisec / 100, centisec % 100);
  return buf;
}

std::optional<UtcTime> parse_iso8601(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS.ccZ ('Z' and centiseconds optional)
  if (s.size() < 19) return std::nullopt;
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
      s[16] != ':')
    return std::nullopt;
  UtcTime t;
  auto grab = [&](size_t pos, size_t n, int& out) {
    auto v = parse_int(s.substr(pos, n));
    if (!v) return false;
    out = *v;
    return true;
  };
  int sec = 0;
  if (!grab(0, 4, t.year) || !grab(5, 2, t.month) || !grab(8, 2, t.day) ||
      !grab(11, 2, t.hour) || !grab(14, 2, t.minute) || !grab(17, 2, sec))
    return std::nullopt;
  int centi = 0;
  if (s.size() >= 22 && s[19] == '.') {
    if (!grab(20, 2, centi)) return std::nullopt;
  }
  t.centisec = sec * 100 + centi;
  if (!t.valid()) return std::nullopt;
  return t;
}

std::vector<TimeWindow> make_windows(MonthIndex first, MonthIndex last, int window_months) {
  if (window_months != 1 && window_months != 12)
    throw std::invalid_argument("window length must be 1 or 12 months");
  if (last < first) throw std::invalid_argument("empty month range");
  std::vector<TimeWindow> out;
  MonthIndex start = first;
  if (window_months == 12) start = month_index(year_of(first), 1);
  for (MonthIndex s = start; s <= last; s += window_months)
    out.push_back({s, window_months});
  return out;
}

}  // namespace resi
