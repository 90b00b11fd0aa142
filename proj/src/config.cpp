#include "resi/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace resi {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (size_t k = 0; k < s.size(); ++k) {
    if (s[k] == '"') in_string = !in_string;
    if (s[k] == '#' && !in_string) return s.substr(0, k);
  }
  return s;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return std::string(s.substr(1, s.size() - 2));
  return std::string(s);
}

// Split a [a, b, c] literal into raw element strings.
std::optional<std::vector<std::string>> split_array(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
  s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  bool in_string = false;
  size_t start = 0;
  for (size_t k = 0; k <= s.size(); ++k) {
    if (k < s.size() && s[k] == '"') in_string = !in_string;
    if (k == s.size() || (s[k] == ',' && !in_string)) {
      std::string_view piece = trim(s.substr(start, k - start));
      if (!piece.empty()) out.push_back(std::string(piece));
      start = k + 1;
    }
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  try {
    size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

const std::string* ConfigDoc::Section::find(std::string_view key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

ConfigDoc ConfigDoc::parse(std::string_view text) {
  ConfigDoc doc;
  Section* current = nullptr;
  size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = trim(strip_comment(text.substr(pos, eol - pos)));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(line_no) + ": bad section");
      doc.sections.push_back({std::string(trim(line.substr(1, line.size() - 2))), {}});
      current = &doc.sections.back();
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
    if (current == nullptr) {
      doc.sections.push_back({"", {}});
      current = &doc.sections.back();
    }
    current->entries.push_back(
        {std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1)))});
  }
  return doc;
}

ConfigDoc ConfigDoc::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const ConfigDoc::Section* ConfigDoc::section(std::string_view name) const {
  for (const Section& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<const ConfigDoc::Section*> ConfigDoc::sections_with_prefix(
    std::string_view prefix) const {
  std::vector<const Section*> out;
  for (const Section& s : sections)
    if (s.name.size() >= prefix.size() && std::string_view(s.name).substr(0, prefix.size()) == prefix)
      out.push_back(&s);
  return out;
}

std::optional<std::string> ConfigDoc::get_string(std::string_view sec,
                                                 std::string_view key) const {
  const Section* s = section(sec);
  if (!s) return std::nullopt;
  const std::string* raw = s->find(key);
  if (!raw) return std::nullopt;
  return unquote(*raw);
}

std::optional<double> ConfigDoc::get_double(std::string_view sec, std::string_view key) const {
  const Section* s = section(sec);
  if (!s) return std::nullopt;
  const std::string* raw = s->find(key);
  if (!raw) return std::nullopt;
  auto v = to_double(*raw);
  if (!v) throw std::runtime_error("config key " + std::string(key) + ": expected a number");
  return v;
}

std::optional<long> ConfigDoc::get_int(std::string_view sec, std::string_view key) const {
  auto v = get_double(sec, key);
  if (!v) return std::nullopt;
  return static_cast<long>(*v);
}

std::optional<bool> ConfigDoc::get_bool(std::string_view sec, std::string_view key) const {
  const Section* s = section(sec);
  if (!s) return std::nullopt;
  const std::string* raw = s->find(key);
  if (!raw) return std::nullopt;
  if (*raw == "true") return true;
  if (*raw == "false") return false;
  throw std::runtime_error("config key " + std::string(key) + ": expected true/false");
}

std::optional<std::vector<double>> ConfigDoc::get_numbers(std::string_view sec,
                                                          std::string_view key) const {
  const Section* s = section(sec);
  if (!s) return std::nullopt;
  const std::string* raw = s->find(key);
  if (!raw) return std::nullopt;
  auto parts = split_array(*raw);
  if (!parts) throw std::runtime_error("config key " + std::string(key) + ": expected an array");
  std::vector<double> out;
  for (const std::string& p : *parts) {
    auto v = to_double(p);
    if (!v) throw std::runtime_error("config key " + std::string(key) + ": expected numbers");
    out.push_back(*v);
  }
  return out;
}

std::optional<std::vector<std::string>> ConfigDoc::get_strings(std::string_view sec,
                                                               std::string_view key) const {
  const Section* s = section(sec);
  if (!s) return std::nullopt;
  const std::string* raw = s->find(key);
  if (!raw) return std::nullopt;
  auto parts = split_array(*raw);
  if (!parts) throw std::runtime_error("config key " + std::string(key) + ": expected an array");
  std::vector<std::string> out;
  for (const std::string& p : *parts) out.push_back(unquote(p));
  return out;
}

namespace {

MeshRect rect_from_string(const std::string& text) {
  std::vector<int> nums;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (!trim(cur).empty()) nums.push_back(std::stoi(std::string(trim(cur))));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (nums.size() != 4) throw std::runtime_error("cluster rect needs i0,j0,i1,j1: " + text);
  return MeshRect{nums[0], nums[1], nums[2], nums[3]};
}

ScenarioPhase phase_from_section(const ConfigDoc& doc, const std::string& name) {
  ScenarioPhase phase;
  if (auto v = doc.get_int(name, "months")) phase.months = static_cast<int>(*v);
  if (auto v = doc.get_double(name, "rate")) phase.rate_per_mesh = *v;
  if (auto v = doc.get_double(name, "background")) phase.background_rate = *v;
  if (auto rects = doc.get_strings(name, "clusters"))
    for (const std::string& r : *rects) phase.clusters.push_back(rect_from_string(r));
  return phase;
}

}  // namespace

ScenarioSpec scenario_from_config(const ConfigDoc& doc) {
  ScenarioSpec spec = default_figure1_scenario();
  if (auto v = doc.get_int("scenario", "seed")) spec.seed = static_cast<std::uint64_t>(*v);
  if (auto v = doc.get_numbers("scenario", "region")) {
    if (v->size() != 4) throw std::runtime_error("scenario region needs [lat0, lon0, lat1, lon1]");
    spec.region = Region::from_corners((*v)[0], (*v)[1], (*v)[2], (*v)[3]);
  }
  if (auto v = doc.get_string("scenario", "start")) {
    auto m = parse_month(*v);
    if (!m) throw std::runtime_error("scenario start must be YYYY-MM");
    spec.start_month = *m;
  }
  if (auto v = doc.get_double("scenario", "mesh")) spec.grid.dx = spec.grid.dy = *v;
  if (auto v = doc.get_double("scenario", "b_value")) spec.b_value = *v;
  if (auto v = doc.get_double("scenario", "mag_floor")) spec.mag_floor = *v;
  if (auto v = doc.get_bool("scenario", "deterministic")) spec.deterministic = *v;

  std::vector<ScenarioPhase> phases;
  for (const ConfigDoc::Section* s : doc.sections_with_prefix("phase"))
    phases.push_back(phase_from_section(doc, s->name));
  if (!phases.empty()) spec.phases = phases;
  return spec;
}

ScenarioSpec scenario_from_file(const std::string& path) {
  return scenario_from_config(ConfigDoc::parse_file(path));
}

}  // namespace resi
