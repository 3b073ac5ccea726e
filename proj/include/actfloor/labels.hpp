#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "actfloor/image.hpp"

namespace actfloor {

/// Category-channel codes. Room categories occupy 0..7; structural labels
/// sit well above them so an 8-bit PNG stays human-readable.
enum class RoomLabel : std::uint8_t {
  Living = 0,
  Master = 1,
  Second = 2,
  Study = 3,
  Bathroom = 4,
  Kitchen = 5,
  Balcony = 6,
  OtherRoom = 7,
  Wall = 100,
  InteriorDoor = 120,
  MainEntrance = 140,
  Outside = 255,
};

inline constexpr std::array<RoomLabel, 12> kAllLabels = {
    RoomLabel::Living,   RoomLabel::Master,  RoomLabel::Second,    RoomLabel::Study,
    RoomLabel::Bathroom, RoomLabel::Kitchen, RoomLabel::Balcony,   RoomLabel::OtherRoom,
    RoomLabel::Wall,     RoomLabel::InteriorDoor, RoomLabel::MainEntrance, RoomLabel::Outside};

inline constexpr int kRoomTypeCount = 8;

constexpr std::uint8_t code(RoomLabel l) { return static_cast<std::uint8_t>(l); }

constexpr bool is_room_type(RoomLabel l) { return code(l) < kRoomTypeCount; }

/// Wall-like labels: walls and the openings cut into them.
constexpr bool is_structural(RoomLabel l) {
  return l == RoomLabel::Wall || l == RoomLabel::InteriorDoor || l == RoomLabel::MainEntrance;
}

/// Index of a label inside kAllLabels (0..11), used for one-hot encodings.
int label_index(RoomLabel l);

std::optional<RoomLabel> label_from_code(std::uint8_t c);
std::string_view label_name(RoomLabel l);
std::optional<RoomLabel> label_from_name(std::string_view name);

using LabelImage = Image<RoomLabel>;

}  // namespace actfloor
