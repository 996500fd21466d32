#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tollsafe/geometry.hpp"

namespace tollsafe {

/// Ordered named polygons plus the enclosing study area, all in meters.
/// Ties on shared boundaries resolve to the earlier (lower-numbered) zone.
struct ZoneMap {
  std::vector<Vec2> study_area;
  std::vector<std::pair<std::string, std::vector<Vec2>>> zones;
};

/// Read a zone map from a JSON file:
///   {"study_area": [[x,y],...], "zones": [{"name":..., "polygon": [[x,y],...]}, ...]}
ZoneMap load_zone_map(const std::string& path);

bool in_study_area(Vec2 p, const ZoneMap& zones);

/// Name of the first zone containing the point, or empty when the point is
/// outside the study area or in no named zone.
std::optional<std::string> assign_zone(Vec2 p, const ZoneMap& zones);

}  // namespace tollsafe
