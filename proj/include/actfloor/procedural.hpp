#pragma once

#include <cstdint>

#include "actfloor/floorplan.hpp"

namespace actfloor {

/// Parameters of the synthetic residential layouts: a rectangular (optionally
/// notched) footprint split into a band of rooms, a living band and an
/// optional second band of rooms. Every room opens onto the living band.
struct ProceduralOptions {
  int min_width = 190;
  int max_width = 230;
  int min_height = 175;
  int max_height = 220;
  int wall = 2;
  int door_width = 8;
  int entrance_width = 10;
  double notch_probability = 0.4;
  double single_band_probability = 0.25;
};

RasterFloorplan make_procedural_floorplan(std::uint64_t seed, const ProceduralOptions& opts = {});

}  // namespace actfloor
