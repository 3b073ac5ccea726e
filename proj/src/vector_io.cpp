#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "actfloor/json_io.hpp"
#include "actfloor/vectorize.hpp"

namespace actfloor {

using nlohmann::json;

namespace {

const char* room_fill(RoomLabel t) {
  switch (t) {
    case RoomLabel::Living: return "#f2e3c6";
    case RoomLabel::Master: return "#c9dcef";
    case RoomLabel::Second: return "#d6e8d2";
    case RoomLabel::Study: return "#e6d4ea";
    case RoomLabel::Bathroom: return "#cfeeee";
    case RoomLabel::Kitchen: return "#f4d2c4";
    case RoomLabel::Balcony: return "#e9efc2";
    default: return "#dddddd";
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(ErrorCode::InvalidArgument, "position must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

bool orientation_from(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "horizontal") return true;
  if (s == "vertical") return false;
  fail(ErrorCode::InvalidArgument, "orientation must be horizontal or vertical");
}

}  // namespace

std::string export_svg(const VectorFloorplan& vf) {
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << vf.width << "\" height=\"" << vf.height
    << "\" viewBox=\"0 0 " << vf.width << ' ' << vf.height << "\">\n";
  for (const auto& r : vf.rooms) {
    s << "  <path class=\"room\" data-type=\"" << label_name(r.type) << "\" fill=\"" << room_fill(r.type) << "\" d=\"";
    for (std::size_t i = 0; i < r.polygon.size(); ++i)
      s << (i == 0 ? "M" : " L") << r.polygon[i].x << ' ' << r.polygon[i].y;
    s << " Z\"/>\n";
  }
  for (const auto& w : vf.walls) {
    const Rect r = w.rect();
    // Stroke along the band's centre line.
    const double x1 = w.horizontal ? r.x : r.x + r.w / 2.0, y1 = w.horizontal ? r.y + r.h / 2.0 : r.y;
    const double x2 = w.horizontal ? r.right() : x1, y2 = w.horizontal ? y1 : r.bottom();
    s << "  <line class=\"wall\" x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\""
      << num(y2) << "\" stroke=\"#333333\" stroke-width=\"" << w.thickness << "\"/>\n";
  }
  for (const auto& d : vf.doors) {
    // Hinge at one end of the opening, leaf swung into the room.
    const double half = d.width / 2.0;
    const Vec2 hinge = d.horizontal ? Vec2{d.position.x - half, d.position.y} : Vec2{d.position.x, d.position.y - half};
    const Vec2 other = d.horizontal ? Vec2{d.position.x + half, d.position.y} : Vec2{d.position.x, d.position.y + half};
    const Vec2 leaf{hinge.x - d.outward.x * d.width, hinge.y - d.outward.y * d.width};
    s << "  <path class=\"door\" fill=\"none\" stroke=\"#8a5a2b\" d=\"M" << num(hinge.x) << ' ' << num(hinge.y) << " L"
      << num(leaf.x) << ' ' << num(leaf.y) << " A" << d.width << ' ' << d.width << " 0 0 "
      << ((d.horizontal ? d.outward.y > 0 : d.outward.x < 0) ? 0 : 1) << ' ' << num(other.x) << ' ' << num(other.y)
      << "\"/>\n";
  }
  if (vf.main_entrance) {
    const auto& e = *vf.main_entrance;
    s << "  <line class=\"entrance\" x1=\"" << num(e.a.x) << "\" y1=\"" << num(e.a.y) << "\" x2=\"" << num(e.b.x)
      << "\" y2=\"" << num(e.b.y) << "\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string export_json(const VectorFloorplan& vf) {
  json rooms = json::array(), walls = json::array(), doors = json::array();
  for (const auto& r : vf.rooms) {
    json poly = json::array();
    for (Point p : r.polygon) poly.push_back(point_json(p));
    rooms.push_back({{"type", std::string(label_name(r.type))}, {"polygon", poly}, {"ambiguous", r.ambiguous}});
  }
  for (const auto& w : vf.walls)
    walls.push_back({{"orientation", w.horizontal ? "horizontal" : "vertical"},
                     {"from", w.from},
                     {"to", w.to},
                     {"offset", w.offset},
                     {"thickness", w.thickness}});
  for (const auto& d : vf.doors)
    doors.push_back({{"room", d.room_index},
                     {"position", vec_json(d.position)},
                     {"width", d.width},
                     {"orientation", d.horizontal ? "horizontal" : "vertical"},
                     {"outward", point_json(d.outward)}});
  json entrance = nullptr;
  if (vf.main_entrance) entrance = {{"a", vec_json(vf.main_entrance->a)}, {"b", vec_json(vf.main_entrance->b)}};
  const json doc = {{"width", vf.width}, {"height", vf.height}, {"rooms", rooms},
                    {"walls", walls},    {"doors", doors},      {"main_entrance", entrance}};
  return doc.dump(2);
}

VectorFloorplan vector_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    VectorFloorplan vf;
    vf.width = doc.at("width").get<int>();
    vf.height = doc.at("height").get<int>();
    for (const auto& r : doc.at("rooms")) {
      VectorRoom room;
      const auto type = label_from_name(r.at("type").get<std::string>());
      if (!type) fail(ErrorCode::InvalidArgument, "unknown room type");
      room.type = *type;
      for (const auto& p : r.at("polygon")) room.polygon.push_back(point_from_json(p));
      room.ambiguous = r.value("ambiguous", false);
      vf.rooms.push_back(std::move(room));
    }
    for (const auto& w : doc.at("walls"))
      vf.walls.push_back({orientation_from(w.at("orientation")), w.at("from").get<int>(), w.at("to").get<int>(),
                          w.at("offset").get<int>(), w.at("thickness").get<int>()});
    for (const auto& d : doc.at("doors")) {
      VectorDoor door;
      door.room_index = d.at("room").get<int>();
      if (door.room_index < 0 || door.room_index >= static_cast<int>(vf.rooms.size()))
        fail(ErrorCode::InvalidArgument, "door references a missing room");
      door.position = vec_from_json(d.at("position"));
      door.width = d.at("width").get<int>();
      door.horizontal = orientation_from(d.at("orientation"));
      door.outward = point_from_json(d.at("outward"));
      vf.doors.push_back(door);
    }
    if (doc.contains("main_entrance") && !doc["main_entrance"].is_null()) {
      const auto& e = doc["main_entrance"];
      vf.main_entrance = EntranceSegment{vec_from_json(e.at("a")), vec_from_json(e.at("b"))};
    }
    return vf;
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("malformed vector floorplan: ") + e.what());
  }
}

}  // namespace actfloor
