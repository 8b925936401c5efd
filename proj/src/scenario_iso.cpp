#include "crashdet/scenario/iso.hpp"

#include <cstdio>

#include "crashdet/core/errors.hpp"
#include "crashdet/core/random.hpp"
#include "crashdet/core/types.hpp"

namespace crashdet::scenario {

namespace {

IsoConfig entry(const char* position, double vcar, double vmoto, double yaw_deg, double offset,
                double closing, int approach, double long_scale, DelayCategory cat) {
  IsoConfig c;
  c.position = position;
  c.car_speed = vcar;
  c.moto_speed = vmoto;
  c.code = format_iso_code(position, vcar, vmoto);
  c.car_yaw = deg2rad(yaw_deg < 0 ? yaw_deg + 360.0 : yaw_deg);
  c.offset = offset;
  c.closing_speed = closing;
  c.approach = approach;
  c.long_scale = long_scale;
  c.category = cat;
  c.note = "geometry reconstructed from the standard's configuration schematic";
  return c;
}

std::vector<IsoConfig> build_catalog() {
  using DC = DelayCategory;
  std::vector<IsoConfig> v;
  // frontal: the moto runs its front into car material
  v.push_back(entry("413", 0.0, 13.4, 0, 0.10, 0.0, +1, 1.0, DC::Frontal));
  v.push_back(entry("413", 6.7, 13.4, 0, 0.10, 0.0, +1, 1.0, DC::Frontal));
  v.push_back(entry("213", 6.7, 13.4, 0, -0.10, 0.0, +1, 1.0, DC::Frontal));
  v.push_back(entry("113", 0.0, 13.4, 90, 0.0, 0.0, +1, 1.0, DC::Frontal));
  v.push_back(entry("113", 6.7, 13.4, 90, 0.0, 6.7, +1, 1.0, DC::Frontal));
  v.push_back(entry("313", 0.0, 13.4, 90, 0.0, 0.0, +1, 1.0, DC::Frontal));
  v.push_back(entry("313", 6.7, 9.8, 90, 0.0, -6.7, +1, 1.0, DC::Frontal));
  v.push_back(entry("413", 0.0, 9.8, 0, 0.10, 0.0, +1, 1.0, DC::Frontal));
  v.push_back(entry("213", 0.0, 9.8, 0, -0.10, 0.0, +1, 1.0, DC::Frontal));
  v.push_back(entry("113", 13.4, 13.4, 90, 0.0, 13.4, +1, 1.0, DC::Frontal));
  // lateral/rear: the car strikes the standing moto
  v.push_back(entry("143", 9.8, 0.0, 90, 0.0, 9.8, -1, 0.71, DC::LateralRear));
  v.push_back(entry("141", 9.8, 0.0, 90, 0.20, 9.8, -1, 0.71, DC::LateralRear));
  v.push_back(entry("112", 6.7, 0.0, 90, -0.30, 6.7, +1, 0.20, DC::LateralRear));
  v.push_back(entry("114", 6.7, 0.0, 90, 0.30, 6.7, +1, 0.20, DC::LateralRear));
  v.push_back(entry("152", 9.8, 0.0, 90, -0.20, 9.8, -1, 0.50, DC::LateralRear));
  v.push_back(entry("114", 9.8, 0.0, 90, 0.30, 9.8, +1, 0.20, DC::LateralRear));
  v.push_back(entry("112", 9.8, 0.0, 90, -0.30, 9.8, +1, 0.20, DC::LateralRear));
  v.push_back(entry("131", 6.7, 0.0, 90, 0.0, 6.7, -1, 0.20, DC::LateralRear));
  v.push_back(entry("151", 13.4, 0.0, 90, 0.0, 13.4, -1, 1.0, DC::LateralRear));
  // grazing: shallow or far-offset engagements
  v.push_back(entry("423", 6.7, 13.4, 45, 1.20, 0.0, +1, 1.0, DC::Grazing));
  v.push_back(entry("223", 6.7, 13.4, 315, -1.20, 0.0, +1, 1.0, DC::Grazing));
  v.push_back(entry("423", 0.0, 13.4, 45, 1.25, 0.0, +1, 1.0, DC::Grazing));
  v.push_back(entry("123", 0.0, 13.4, 90, 1.10, 0.0, +1, 1.0, DC::Grazing));
  v.push_back(entry("443", 9.8, 6.7, 45, 1.15, 0.0, +1, 1.0, DC::Grazing));
  v.push_back(entry("323", 0.0, 13.4, 90, -1.10, 0.0, +1, 1.0, DC::Grazing));
  return v;
}

}  // namespace

const std::vector<IsoConfig>& iso_catalog() {
  static const std::vector<IsoConfig> catalog = build_catalog();
  return catalog;
}

std::string format_iso_code(const std::string& position, double car_speed, double moto_speed) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s-%g/%g", position.c_str(), car_speed, moto_speed);
  return buf;
}

IsoConfig parse_iso_code(const std::string& code) {
  IsoConfig c;
  const auto dash = code.find('-');
  const auto slash = code.find('/', dash == std::string::npos ? 0 : dash);
  if (dash == std::string::npos || slash == std::string::npos || dash != 3) {
    throw ParseError("malformed impact code '" + code + "' (expected XXX-Y/Z)");
  }
  c.position = code.substr(0, dash);
  for (char ch : c.position) {
    if (ch < '1' || ch > '9') throw ParseError("malformed position digits in '" + code + "'");
  }
  try {
    c.car_speed = std::stod(code.substr(dash + 1, slash - dash - 1));
    c.moto_speed = std::stod(code.substr(slash + 1));
  } catch (const std::exception&) {
    throw ParseError("malformed speeds in impact code '" + code + "'");
  }
  if (c.car_speed < 0.0 || c.moto_speed < 0.0) {
    throw ParseError("impact speeds must be non-negative in '" + code + "'");
  }
  c.code = code;
  return c;
}

const IsoConfig& iso_lookup(const std::string& code) {
  for (const auto& c : iso_catalog()) {
    if (c.code == code) return c;
  }
  throw ValidationError("impact code '" + code + "' is not in the 25-entry catalog");
}

std::vector<ScenarioSpec> make_set_b3(std::uint64_t seed) {
  std::vector<ScenarioSpec> specs;
  int i = 0;
  for (const auto& cfg : iso_catalog()) {
    ScenarioSpec s;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "B3-%03d", i);
    s.id = buf;
    s.set = SetId::B3;
    s.iso_code = cfg.code;
    s.seed = derive_seed(seed, 500 + static_cast<std::uint64_t>(i));
    s.params["v_car"] = cfg.car_speed;
    s.params["v0"] = cfg.moto_speed;
    s.horizon = 4.0;
    specs.push_back(std::move(s));
    ++i;
  }
  return specs;
}

}  // namespace crashdet::scenario
