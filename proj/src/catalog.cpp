#include "resi/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace resi {

namespace {

enum class FieldState { blank, value, invalid };

struct IntField {
  FieldState state = FieldState::blank;
  long value = 0;
};

// Right-justified integer field: leading blanks, optional sign, digits.
IntField read_int(std::string_view line, ColumnMap::Span span) {
  if (span.offset >= static_cast<int>(line.size())) return {};
  std::string_view raw = line.substr(span.offset, span.len);
  size_t p = 0;
  while (p < raw.size() && raw[p] == ' ') ++p;
  if (p == raw.size()) return {};
  bool neg = false;
  if (raw[p] == '-' || raw[p] == '+') {
    neg = raw[p] == '-';
    ++p;
  }
  if (p == raw.size()) return {FieldState::invalid, 0};
  long v = 0;
  for (; p < raw.size(); ++p) {
    if (!std::isdigit(static_cast<unsigned char>(raw[p]))) return {FieldState::invalid, 0};
    v = v * 10 + (raw[p] - '0');
  }
  return {FieldState::value, neg ? -v : v};
}

bool field_in_line(std::string_view line, ColumnMap::Span span) {
  return static_cast<int>(line.size()) >= span.offset + span.len;
}

std::optional<double> decode_magnitude(std::string_view raw) {
  if (raw.size() != 2) return std::nullopt;
  const char hi = raw[0];
  const char lo = raw[1];
  if (!std::isdigit(static_cast<unsigned char>(lo))) return std::nullopt;
  const int y = lo - '0';
  int m10 = 0;
  if (std::isdigit(static_cast<unsigned char>(hi)))
    m10 = (hi - '0') * 10 + y;
  else if (hi == '-')
    m10 = -y;
  else if (hi >= 'A' && hi <= 'C')
    m10 = -((hi - 'A' + 1) * 10 + y);
  else
    return std::nullopt;
  const double mag = m10 / 10.0;
  if (mag < -2.0 || mag > 10.0) return std::nullopt;
  return mag;
}

void put_text(std::string& line, int offset, std::string_view text) {
  for (size_t k = 0; k < text.size(); ++k) line[offset + k] = text[k];
}

void put_int(std::string& line, ColumnMap::Span span, long value, bool zero_pad) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), zero_pad ? "%0*ld" : "%*ld", span.len, value);
  put_text(line, span.offset, std::string_view(buf, span.len));
}

ColumnMap::Span span_from_json(const nlohmann::json& j) {
  return ColumnMap::Span{j.at("offset").get<int>(), j.at("len").get<int>()};
}

nlohmann::json span_to_json(ColumnMap::Span s) {
  return nlohmann::json{{"offset", s.offset}, {"len", s.len}};
}

}  // namespace

int ColumnMap::min_length() const {
  int need = 0;
  for (Span s : {year, month, day, hour, minute, lat_deg, lat_min_centi, lon_deg,
                 lon_min_centi, magnitude})
    need = std::max(need, s.offset + s.len);
  return need;
}

ColumnMap column_map_from_json(const std::string& json_text) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  ColumnMap m;
  if (j.contains("markers")) m.markers = j.at("markers").get<std::string>();
  auto load = [&](const char* key, ColumnMap::Span& dst) {
    if (j.contains(key)) dst = span_from_json(j.at(key));
  };
  load("year", m.year);
  load("month", m.month);
  load("day", m.day);
  load("hour", m.hour);
  load("minute", m.minute);
  load("second_centi", m.second_centi);
  load("time_err_centi", m.time_err_centi);
  load("lat_deg", m.lat_deg);
  load("lat_min_centi", m.lat_min_centi);
  load("lat_err_centi", m.lat_err_centi);
  load("lon_deg", m.lon_deg);
  load("lon_min_centi", m.lon_min_centi);
  load("lon_err_centi", m.lon_err_centi);
  load("depth", m.depth);
  load("magnitude", m.magnitude);
  return m;
}

std::string column_map_to_json(const ColumnMap& m) {
  nlohmann::json j;
  j["markers"] = m.markers;
  j["year"] = span_to_json(m.year);
  j["month"] = span_to_json(m.month);
  j["day"] = span_to_json(m.day);
  j["hour"] = span_to_json(m.hour);
  j["minute"] = span_to_json(m.minute);
  j["second_centi"] = span_to_json(m.second_centi);
  j["time_err_centi"] = span_to_json(m.time_err_centi);
  j["lat_deg"] = span_to_json(m.lat_deg);
  j["lat_min_centi"] = span_to_json(m.lat_min_centi);
  j["lat_err_centi"] = span_to_json(m.lat_err_centi);
  j["lon_deg"] = span_to_json(m.lon_deg);
  j["lon_min_centi"] = span_to_json(m.lon_min_centi);
  j["lon_err_centi"] = span_to_json(m.lon_err_centi);
  j["depth"] = span_to_json(m.depth);
  j["magnitude"] = span_to_json(m.magnitude);
  return j.dump(2);
}

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::record_type: return "record_type";
    case RejectReason::too_short: return "too_short";
    case RejectReason::bad_time: return "bad_time";
    case RejectReason::bad_position: return "bad_position";
    case RejectReason::bad_magnitude: return "bad_magnitude";
  }
  return "unknown";
}

ParseOutcome parse_record(std::string_view line, const ColumnMap& map) {
  if (line.empty() || map.markers.find(line[0]) == std::string::npos)
    return RecordError{RejectReason::record_type, "unrecognized record marker"};
  if (static_cast<int>(line.size()) < map.min_length())
    return RecordError{RejectReason::too_short, "record shorter than required columns"};

  Event e;

  // Date and time. Seconds may be blank (midnight-precision records).
  const IntField fy = read_int(line, map.year);
  const IntField fmo = read_int(line, map.month);
  const IntField fd = read_int(line, map.day);
  const IntField fh = read_int(line, map.hour);
  const IntField fmi = read_int(line, map.minute);
  const IntField fs = read_int(line, map.second_centi);
  if (fy.state != FieldState::value || fmo.state != FieldState::value ||
      fd.state != FieldState::value || fh.state != FieldState::value ||
      fmi.state != FieldState::value || fs.state == FieldState::invalid)
    return RecordError{RejectReason::bad_time, "malformed date/time"};
  e.time = UtcTime{static_cast<int>(fy.value), static_cast<int>(fmo.value),
                   static_cast<int>(fd.value), static_cast<int>(fh.value),
                   static_cast<int>(fmi.value),
                   fs.state == FieldState::value ? static_cast<int>(fs.value) : 0};
  if (!e.time.valid()) return RecordError{RejectReason::bad_time, "date/time out of range"};

  // Position: degrees plus centi-arcminutes; sign lives on the degree field.
  const IntField lat_d = read_int(line, map.lat_deg);
  const IntField lat_m = read_int(line, map.lat_min_centi);
  const IntField lon_d = read_int(line, map.lon_deg);
  const IntField lon_m = read_int(line, map.lon_min_centi);
  if (lat_d.state != FieldState::value || lat_m.state != FieldState::value ||
      lon_d.state != FieldState::value || lon_m.state != FieldState::value ||
      lat_m.value < 0 || lon_m.value < 0)
    return RecordError{RejectReason::bad_position, "malformed latitude/longitude"};
  const double lat_sign = lat_d.value < 0 ? -1.0 : 1.0;
  const double lon_sign = lon_d.value < 0 ? -1.0 : 1.0;
  e.lat = lat_sign * (std::labs(lat_d.value) + lat_m.value / 6000.0);
  e.lon = lon_sign * (std::labs(lon_d.value) + lon_m.value / 6000.0);
  if (e.lat < -90.0 || e.lat > 90.0 || e.lon < -180.0 || e.lon > 360.0)
    return RecordError{RejectReason::bad_position, "latitude/longitude out of range"};
  if (e.lon >= 180.0) e.lon -= 360.0;

  const std::string_view mag_raw = line.substr(map.magnitude.offset, map.magnitude.len);
  if (mag_raw.find_first_not_of(' ') == std::string_view::npos)
    return RecordError{RejectReason::bad_magnitude, "blank magnitude"};
  auto mag = decode_magnitude(mag_raw);
  if (!mag) return RecordError{RejectReason::bad_magnitude, "non-numeric magnitude"};
  e.magnitude = *mag;

  // Optional fields: blanks mean absent.
  const IntField terr = read_int(line, map.time_err_centi);
  if (terr.state == FieldState::value) e.time_err_s = terr.value / 100.0;
  const IntField laerr = read_int(line, map.lat_err_centi);
  if (laerr.state == FieldState::value) e.lat_err_deg = laerr.value / 6000.0;
  const IntField loerr = read_int(line, map.lon_err_centi);
  if (loerr.state == FieldState::value) e.lon_err_deg = loerr.value / 6000.0;

  // Depth: "dddcc" in centi-km, or "ddd  " whole km when the depth was fixed.
  if (field_in_line(line, map.depth)) {
    std::string_view raw = line.substr(map.depth.offset, map.depth.len);
    const bool tail_blank = raw.size() == 5 && raw[3] == ' ' && raw[4] == ' ';
    if (tail_blank) {
      const IntField whole = read_int(line, {map.depth.offset, 3});
      if (whole.state == FieldState::value) {
        e.depth_km = static_cast<double>(whole.value);
        e.depth_whole_km = true;
      }
    } else {
      const IntField centi = read_int(line, map.depth);
      if (centi.state == FieldState::value) e.depth_km = centi.value / 100.0;
    }
  }

  return e;
}

std::string encode_record(const Event& e, const ColumnMap& map) {
  int width = std::max(96, map.min_length());
  for (ColumnMap::Span s : {map.time_err_centi, map.lat_err_centi, map.lon_err_centi, map.depth})
    width = std::max(width, s.offset + s.len);
  std::string line(static_cast<size_t>(width), ' ');
  line[0] = map.markers.empty() ? 'J' : map.markers[0];

  put_int(line, map.year, e.time.year, true);
  put_int(line, map.month, e.time.month, true);
  put_int(line, map.day, e.time.day, true);
  put_int(line, map.hour, e.time.hour, true);
  put_int(line, map.minute, e.time.minute, true);
  put_int(line, map.second_centi, e.time.centisec, true);

  const long lat_centi_min = std::llround(std::abs(e.lat) * 6000.0);
  const long lon_centi_min = std::llround(std::abs(e.lon) * 6000.0);
  put_int(line, map.lat_deg, (e.lat < 0 ? -1 : 1) * (lat_centi_min / 6000), false);
  put_int(line, map.lat_min_centi, lat_centi_min % 6000, true);
  put_int(line, map.lon_deg, (e.lon < 0 ? -1 : 1) * (lon_centi_min / 6000), false);
  put_int(line, map.lon_min_centi, lon_centi_min % 6000, true);

  if (e.time_err_s) put_int(line, map.time_err_centi, std::llround(*e.time_err_s * 100), true);
  if (e.lat_err_deg) put_int(line, map.lat_err_centi, std::llround(*e.lat_err_deg * 6000), true);
  if (e.lon_err_deg) put_int(line, map.lon_err_centi, std::llround(*e.lon_err_deg * 6000), true);

  if (e.depth_km) {
    if (e.depth_whole_km)
      put_int(line, {map.depth.offset, 3}, std::llround(*e.depth_km), false);
    else
      put_int(line, map.depth, std::llround(*e.depth_km * 100), true);
  }

  const long m10 = std::llround(e.magnitude * 10.0);
  if (m10 > 99 || m10 < -39) throw std::invalid_argument("magnitude not encodable");
  char buf[8];
  if (m10 >= 0)
    std::snprintf(buf, sizeof(buf), "%02ld", m10);
  else if (m10 >= -9)
    std::snprintf(buf, sizeof(buf), "-%ld", -m10);
  else
    std::snprintf(buf, sizeof(buf), "%c%ld", static_cast<char>('A' + (-m10 / 10 - 1)), -m10 % 10);
  put_text(line, map.magnitude.offset, std::string_view(buf, 2));

  return line;
}

ParseStats parse_stream(std::istream& in, const ColumnMap& map, std::vector<Event>& out,
                        size_t max_sampled_rejections) {
  ParseStats stats;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++stats.lines;
    ParseOutcome r = parse_record(line, map);
    if (auto* ev = std::get_if<Event>(&r)) {
      out.push_back(*ev);
      ++stats.parsed;
    } else {
      const RecordError& err = std::get<RecordError>(r);
      ++stats.rejected;
      ++stats.rejected_by_reason[static_cast<int>(err.reason)];
      if (stats.sample_rejections.size() < max_sampled_rejections)
        stats.sample_rejections.push_back({stats.lines, err});
    }
  }
  return stats;
}

bool CatalogFilter::keeps(const Event& e) const {
  if (e.magnitude < m0) return false;
  if (!region.contains(e.lat, e.lon)) return false;
  const auto t = e.time.to_centiseconds();
  return t >= t_start.to_centiseconds() && t <= t_end.to_centiseconds();
}

std::vector<Event> filter_events(std::span<const Event> events, const CatalogFilter& f) {
  std::vector<Event> out;
  out.reserve(events.size());
  for (const Event& e : events)
    if (f.keeps(e)) out.push_back(e);
  return out;
}

void write_events_csv(std::ostream& out, std::span<const Event> events) {
  out << "time_utc,lat_deg,lon_deg,depth_km,mag\n";
  char buf[160];
  for (const Event& e : events) {
    std::string depth;
    if (e.depth_km) {
      char d[32];
      std::snprintf(d, sizeof(d), "%.2f", *e.depth_km);
      depth = d;
    }
    std::snprintf(buf, sizeof(buf), "%s,%.5f,%.5f,%s,%.1f\n", e.time.iso8601().c_str(), e.lat,
                  e.lon, depth.c_str(), e.magnitude);
    out << buf;
  }
}

std::vector<Event> read_events_csv(std::istream& in) {
  std::vector<Event> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    size_t start = 0;
    std::string_view sv(line);
    for (size_t k = 0; k <= sv.size(); ++k) {
      if (k == sv.size() || sv[k] == ',') {
        fields.push_back(sv.substr(start, k - start));
        start = k + 1;
      }
    }
    if (fields.size() != 5) throw std::runtime_error("bad event CSV row: " + line);
    Event e;
    auto t = parse_iso8601(fields[0]);
    if (!t) throw std::runtime_error("bad event CSV timestamp: " + line);
    e.time = *t;
    e.lat = std::stod(std::string(fields[1]));
    e.lon = std::stod(std::string(fields[2]));
    if (!fields[3].empty()) e.depth_km = std::stod(std::string(fields[3]));
    e.magnitude = std::stod(std::string(fields[4]));
    out.push_back(e);
  }
  return out;
}

}  // namespace resi
