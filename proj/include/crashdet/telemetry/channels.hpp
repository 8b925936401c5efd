#pragma once

#include <array>
#include <string_view>

namespace crashdet::telemetry {

inline constexpr int kNumChannels = 23;
inline constexpr double kSampleRate = 2000.0;  // Hz, deployment sample rate

// The body's linear channels use the longitudinal (x) component only and the
// angular ones the pitch (y) component only; lateral information never leaves
// the simulator.
struct ChannelSpec {
  const char* name;
  const char* unit;
  const char* component;  // "x", "y" or "-" for scalar joint/contact channels
};

inline const std::array<ChannelSpec, kNumChannels>& channel_table() {
  static constexpr std::array<ChannelSpec, kNumChannels> table = {{
      {"body_lin_vel", "m/s", "x"},
      {"body_lin_acc", "m/s^2", "x"},
      {"body_ang_vel", "rad/s", "y"},
      {"body_ang_acc", "rad/s^2", "y"},
      {"fw_ang_vel", "rad/s", "-"},
      {"fw_ang_acc", "rad/s^2", "-"},
      {"rw_ang_vel", "rad/s", "-"},
      {"rw_ang_acc", "rad/s^2", "-"},
      {"rs_ang_pos", "rad", "-"},
      {"rs_ang_vel", "rad/s", "-"},
      {"rs_ang_acc", "rad/s^2", "-"},
      {"fs_lin_pos", "m", "-"},
      {"fs_lin_vel", "m/s", "-"},
      {"fs_lin_acc", "m/s^2", "-"},
      {"fd_ang_pos", "rad", "-"},
      {"fd_ang_vel", "rad/s", "-"},
      {"fd_ang_acc", "rad/s^2", "-"},
      {"fw_cnt_force", "N", "-"},
      {"rw_cnt_force", "N", "-"},
      {"wheel_vel_diff", "rad/s", "-"},
      {"wheel_acc_diff", "rad/s^2", "-"},
      {"cnt_sensor_left", "bool", "-"},
      {"cnt_sensor_right", "bool", "-"},
  }};
  return table;
}

inline int channel_index(std::string_view name) {
  const auto& table = channel_table();
  for (int i = 0; i < kNumChannels; ++i) {
    if (name == table[static_cast<std::size_t>(i)].name) return i;
  }
  return -1;
}

}  // namespace crashdet::telemetry
