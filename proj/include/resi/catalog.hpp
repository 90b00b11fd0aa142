#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "resi/event.hpp"
#include "resi/grid.hpp"

namespace resi {

// Column layout of a fixed-width hypocenter record. Offsets are 0-based.
// The default follows the JMA bulletin layout; catalogs with revised layouts
// can override it from a JSON file (see column_map_from_json).
struct ColumnMap {
  struct Span {
    int offset = 0;
    int len = 0;
  };

  std::string markers = "J";  // accepted record-type characters at column 0
  Span year{1, 4};
  Span month{5, 2};
  Span day{7, 2};
  Span hour{9, 2};
  Span minute{11, 2};
  Span second_centi{13, 4};    // seconds * 100
  Span time_err_centi{17, 4};  // seconds * 100
  Span lat_deg{21, 3};
  Span lat_min_centi{24, 4};  // arcminutes * 100
  Span lat_err_centi{28, 4};  // arcminutes * 100
  Span lon_deg{32, 4};
  Span lon_min_centi{36, 4};
  Span lon_err_centi{40, 4};
  Span depth{44, 5};  // "dddcc" = d.cc km, or "ddd  " = whole km (fixed depth)
  Span magnitude{52, 2};

  int min_length() const;  // shortest line that covers the required fields
};

ColumnMap column_map_from_json(const std::string& json_text);
std::string column_map_to_json(const ColumnMap& map);

enum class RejectReason {
  record_type,   // marker character not accepted
  too_short,     // line shorter than the required columns
  bad_time,      // malformed or out-of-range date/time
  bad_position,  // malformed latitude/longitude
  bad_magnitude, // blank or non-numeric magnitude field
};

const char* to_string(RejectReason r);

struct RecordError {
  RejectReason reason;
  std::string detail;
};

using ParseOutcome = std::variant<Event, RecordError>;

ParseOutcome parse_record(std::string_view line, const ColumnMap& map);

// Fixed-width line for an event; parse_record(encode_record(e)) == e.
std::string encode_record(const Event& e, const ColumnMap& map);

struct Rejection {
  long line_no = 0;  // 1-based
  RecordError error;
};

struct ParseStats {
  long long lines = 0;
  long long parsed = 0;
  long long rejected = 0;
  long long rejected_by_reason[5] = {0, 0, 0, 0, 0};
  std::vector<Rejection> sample_rejections;  // first few, for diagnostics
};

// Parse every line of the stream; rejects are counted, never dropped silently.
ParseStats parse_stream(std::istream& in, const ColumnMap& map, std::vector<Event>& out,
                        size_t max_sampled_rejections = 20);

struct CatalogFilter {
  double m0 = 2.0;
  Region region = Region::from_corners(25.0, 125.0, 49.0, 149.0);
  UtcTime t_start{1983, 1, 1, 0, 0, 0};
  UtcTime t_end{2017, 3, 31, 23, 59, 5999};  // inclusive

  bool keeps(const Event& e) const;
};

// Magnitude >= m0, epicenter inside the (half-open) region, time within
// [t_start, t_end]. Aftershocks are retained by design.
std::vector<Event> filter_events(std::span<const Event> events, const CatalogFilter& f);

// Normalized event table: time_utc,lat_deg,lon_deg,depth_km,mag
void write_events_csv(std::ostream& out, std::span<const Event> events);
std::vector<Event> read_events_csv(std::istream& in);

}  // namespace resi
