#include "actfloor/labels.hpp"

namespace actfloor {

int label_index(RoomLabel l) {
  for (std::size_t i = 0; i < kAllLabels.size(); ++i)
    if (kAllLabels[i] == l) return static_cast<int>(i);
  fail(ErrorCode::IllegalLabel, "label outside the closed set");
}

std::optional<RoomLabel> label_from_code(std::uint8_t c) {
  for (auto l : kAllLabels)
    if (code(l) == c) return l;
  return std::nullopt;
}

std::string_view label_name(RoomLabel l) {
  switch (l) {
    case RoomLabel::Living: return "Living";
    case RoomLabel::Master: return "Master";
    case RoomLabel::Second: return "Second";
    case RoomLabel::Study: return "Study";
    case RoomLabel::Bathroom: return "Bathroom";
    case RoomLabel::Kitchen: return "Kitchen";
    case RoomLabel::Balcony: return "Balcony";
    case RoomLabel::OtherRoom: return "OtherRoom";
    case RoomLabel::Wall: return "Wall";
    case RoomLabel::InteriorDoor: return "InteriorDoor";
    case RoomLabel::MainEntrance: return "MainEntrance";
    case RoomLabel::Outside: return "Outside";
  }
  return "Unknown";
}

std::optional<RoomLabel> label_from_name(std::string_view name) {
  for (auto l : kAllLabels)
    if (label_name(l) == name) return l;
  return std::nullopt;
}

}  // namespace actfloor
