#pragma once

#include <string>
#include <vector>

#include "crashdet/scenario/spec.hpp"

namespace crashdet::scenario {

enum class DelayCategory { Frontal, LateralRear, Grazing };

inline const char* category_name(DelayCategory c) {
  switch (c) {
    case DelayCategory::Frontal: return "frontal";
    case DelayCategory::LateralRear: return "lateral/rear";
    case DelayCategory::Grazing: return "grazing";
  }
  return "?";
}

// One standardized impact configuration, code XXX-Y/Z.
//
// Position code decoding used here (schematic reconstruction; the standard's
// exact per-code tables are not reproduced in this repo):
//   digit 1 - car zone: 1 front end, 2 right side, 3 rear end, 4 left side
//   digit 2 - relative heading index k -> (k-1) * 45 degrees
//   digit 3 - moto zone: 3 front, 2 right side, 4 left side, 1 rear
//   Y - car impact speed (m/s), Z - moto impact speed (m/s)
struct IsoConfig {
  std::string code;      // full "XXX-Y/Z" string
  std::string position;  // "XXX"
  double car_speed = 0.0;
  double moto_speed = 0.0;

  // derived planar geometry
  double car_yaw = 0.0;        // rad, rectangle plan yaw (0 = broadside)
  double offset = 0.0;         // m, lateral displacement
  double closing_speed = 0.0;  // m/s, barrier speed toward the moto
  int approach = +1;           // +1 barrier ahead of the moto, -1 behind
  double long_scale = 1.0;     // longitudinal projection of the impact
  DelayCategory category = DelayCategory::Frontal;
  std::string note;
};

// The 25-configuration validation catalog.
const std::vector<IsoConfig>& iso_catalog();

std::string format_iso_code(const std::string& position, double car_speed, double moto_speed);

// Parses "XXX-Y/Z" into position and speeds. Throws ParseError on malformed
// input.
IsoConfig parse_iso_code(const std::string& code);

// Full catalog entry (with derived geometry) for a code; throws
// ValidationError for codes outside the catalog.
const IsoConfig& iso_lookup(const std::string& code);

// Scenario specs for set B.3, one per catalog entry.
std::vector<ScenarioSpec> make_set_b3(std::uint64_t seed);

}  // namespace crashdet::scenario
