#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resi/synth.hpp"

namespace resi {

// Declarative key/value configuration with [section] headers. Values are
// bare numbers, booleans, "strings", or [comma, separated, arrays]; '#'
// starts a comment. Sections keep their file order.
struct ConfigDoc {
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(std::string_view key) const;
  };

  std::vector<Section> sections;

  static ConfigDoc parse(std::string_view text);
  static ConfigDoc parse_file(const std::string& path);

  const Section* section(std::string_view name) const;
  std::vector<const Section*> sections_with_prefix(std::string_view prefix) const;

  std::optional<std::string> get_string(std::string_view section, std::string_view key) const;
  std::optional<double> get_double(std::string_view section, std::string_view key) const;
  std::optional<long> get_int(std::string_view section, std::string_view key) const;
  std::optional<bool> get_bool(std::string_view section, std::string_view key) const;
  std::optional<std::vector<double>> get_numbers(std::string_view section,
                                                 std::string_view key) const;
  std::optional<std::vector<std::string>> get_strings(std::string_view section,
                                                      std::string_view key) const;
};

// Scenario file layout:
//   [scenario] seed, region = [lat0, lon0, lat1, lon1], start = "YYYY-MM",
//              mesh, b_value, mag_floor, deterministic
//   [phase.X]  months, rate, background, clusters = ["i0,j0,i1,j1", ...]
// Phases apply in file order.
ScenarioSpec scenario_from_config(const ConfigDoc& doc);
ScenarioSpec scenario_from_file(const std::string& path);

}  // namespace resi
