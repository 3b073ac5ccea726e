#include "actfloor/json_io.hpp"

namespace actfloor {

using nlohmann::json;

namespace {

int int_at(const json& j, std::size_t i) {
  if (!j.is_array() || i >= j.size() || !j[i].is_number_integer()) fail(ErrorCode::InvalidArgument, "expected integer array");
  return j[i].get<int>();
}

}  // namespace

json point_json(Point p) { return json::array({p.x, p.y}); }

Point point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) fail(ErrorCode::InvalidArgument, "point must be [x, y]");
  return {int_at(j, 0), int_at(j, 1)};
}

json rect_json(const Rect& r) { return json::array({r.x, r.y, r.w, r.h}); }

Rect rect_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) fail(ErrorCode::InvalidArgument, "rect must be [x, y, w, h]");
  return {int_at(j, 0), int_at(j, 1), int_at(j, 2), int_at(j, 3)};
}

json furniture_json(const FurnitureInstance& f) {
  return {{"kind", std::string(furniture_name(f.kind))},
          {"rect", rect_json(f.rect)},
          {"room_id", f.room_id},
          {"entrance", point_json(f.entrance)}};
}

FurnitureInstance furniture_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string() || !j.contains("rect"))
    fail(ErrorCode::InvalidArgument, "furniture record needs kind and rect");
  const auto kind = furniture_from_name(j["kind"].get<std::string>());
  if (!kind) fail(ErrorCode::InvalidArgument, "unknown furniture kind " + j["kind"].get<std::string>());
  FurnitureInstance f;
  f.kind = *kind;
  f.rect = rect_from_json(j["rect"]);
  if (j.contains("room_id")) {
    if (!j["room_id"].is_number_integer()) fail(ErrorCode::InvalidArgument, "room_id must be an integer");
    f.room_id = j["room_id"].get<int>();
  }
  if (j.contains("entrance")) f.entrance = point_from_json(j["entrance"]);
  return f;
}

json furniture_list_json(const std::vector<FurnitureInstance>& list) {
  json out = json::array();
  for (const auto& f : list) out.push_back(furniture_json(f));
  return out;
}

std::vector<FurnitureInstance> furniture_list_from_json(const json& j) {
  if (!j.is_array()) fail(ErrorCode::InvalidArgument, "furniture list must be an array");
  std::vector<FurnitureInstance> out;
  for (const auto& item : j) out.push_back(furniture_from_json(item));
  return out;
}

}  // namespace actfloor
