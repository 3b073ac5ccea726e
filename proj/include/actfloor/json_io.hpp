#pragma once

#include <json.hpp>

#include "actfloor/furnish.hpp"

namespace actfloor {

// Points serialize as [x, y]; rects as [x, y, w, h].
nlohmann::json point_json(Point p);
Point point_from_json(const nlohmann::json& j);
nlohmann::json rect_json(const Rect& r);
Rect rect_from_json(const nlohmann::json& j);

/// {"kind": "Bed", "rect": [...], "room_id": 1, "entrance": [x, y]}
nlohmann::json furniture_json(const FurnitureInstance& f);
/// Throws InvalidArgument on malformed records.
FurnitureInstance furniture_from_json(const nlohmann::json& j);
nlohmann::json furniture_list_json(const std::vector<FurnitureInstance>& list);
std::vector<FurnitureInstance> furniture_list_from_json(const nlohmann::json& j);

}  // namespace actfloor
