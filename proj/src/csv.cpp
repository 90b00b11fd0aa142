#include "resi/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace resi {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

namespace {

std::string opt_str(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t k = 0; k <= line.size(); ++k) {
    if (k == line.size() || line[k] == ',') {
      out.push_back(line.substr(start, k - start));
      start = k + 1;
    }
  }
  return out;
}

}  // namespace

void write_series_csv(std::ostream& out, const std::vector<ResiPoint>& series) {
  out << "cell_id,window_start,h,hr,hr_avr,p_s,no_data\n";
  for (const ResiPoint& p : series) {
    out << p.cell_id << ',' << format_month(p.window.start) << ',' << format_double(p.h) << ','
        << format_double(p.hr) << ',' << opt_str(p.hr_avr) << ',' << format_double(p.p_s) << ','
        << (p.no_data ? 1 : 0) << '\n';
  }
}

void write_alarms_csv(std::ostream& out, const std::vector<AlarmRow>& rows) {
  out << "cell_id,window_start,hr,hr_avr,hr_sat,activity,high_hr,high_activity\n";
  for (const AlarmRow& r : rows) {
    out << r.cell_id << ',' << format_month(r.window_start) << ',' << format_double(r.hr) << ','
        << opt_str(r.hr_avr) << ',' << format_double(r.hr_sat) << ',' << opt_str(r.activity)
        << ',' << r.high_hr << ',' << r.high_activity << '\n';
  }
}

std::vector<AlarmRow> read_alarms_csv(std::istream& in) {
  std::vector<AlarmRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 8) throw std::runtime_error("bad alarms CSV row: " + line);
    AlarmRow r;
    r.cell_id = std::stoi(f[0]);
    auto m = parse_month(f[1]);
    if (!m) throw std::runtime_error("bad alarms CSV month: " + line);
    r.window_start = *m;
    r.hr = std::stod(f[2]);
    if (!f[3].empty()) r.hr_avr = std::stod(f[3]);
    r.hr_sat = std::stod(f[4]);
    if (!f[5].empty()) r.activity = std::stod(f[5]);
    r.high_hr = std::stoi(f[6]);
    r.high_activity = std::stoi(f[7]);
    rows.push_back(r);
  }
  return rows;
}

void write_baselines_csv(std::ostream& out, const std::vector<BaselineRow>& rows) {
  out << "cell_id,window_start,pi,ri,high_pi,high_ri\n";
  for (const BaselineRow& r : rows) {
    out << r.cell_id << ',' << format_month(r.window_start) << ',' << opt_str(r.pi) << ','
        << opt_str(r.ri) << ',' << r.high_pi << ',' << r.high_ri << '\n';
  }
}

}  // namespace resi
