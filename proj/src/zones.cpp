#include "tollsafe/zones.hpp"

#include <fstream>

#include <json.hpp>

#include "tollsafe/error.hpp"

namespace tollsafe {

namespace {

std::vector<Vec2> parse_polygon(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() < 3)
    throw config_error("zone map: " + what + " must be a polygon with >= 3 vertices");
  std::vector<Vec2> poly;
  for (const auto& v : j) {
    if (!v.is_array() || v.size() != 2)
      throw config_error("zone map: " + what + " vertices must be [x, y] pairs");
    poly.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return poly;
}

}  // namespace

ZoneMap load_zone_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open zone map: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("zone map " + path + ": " + e.what());
  }
  ZoneMap zm;
  if (!j.contains("study_area")) throw config_error("zone map: missing study_area");
  zm.study_area = parse_polygon(j["study_area"], "study_area");
  for (const auto& z : j.value("zones", nlohmann::json::array())) {
    std::string name = z.value("name", "");
    if (name.empty()) throw config_error("zone map: zone without a name");
    zm.zones.emplace_back(name, parse_polygon(z["polygon"], name));
  }
  return zm;
}

bool in_study_area(Vec2 p, const ZoneMap& zones) {
  return point_in_polygon(p, zones.study_area);
}

std::optional<std::string> assign_zone(Vec2 p, const ZoneMap& zones) {
  if (!in_study_area(p, zones)) return std::nullopt;
  for (const auto& [name, poly] : zones.zones)
    if (point_in_polygon(p, poly)) return name;
  return std::nullopt;
}

}  // namespace tollsafe
